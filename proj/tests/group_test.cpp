#include <doctest.h>

#include "support/zoo.hpp"

using namespace gca;

TEST_CASE("cayley table validation") {
  SUBCASE("Z2 is valid and abelian") {
    auto g = Group::from_table({"0", "1"}, {{0, 1}, {1, 0}});
    CHECK(g->order() == 2);
    CHECK(g->identity() == 0);
    CHECK(g->abelian());
    CHECK(g->inv(1) == 1);
  }
  SUBCASE("missing inverse is reported for the offending element") {
    try {
      Group::from_table({"0", "1"}, {{0, 1}, {1, 1}});
      FAIL("expected a validation error");
    } catch (const Error& e) {
      CHECK((e.code() == Errc::NoInverse || e.code() == Errc::NoIdentity));
    }
  }
  SUBCASE("non-associative table is rejected") {
    std::vector<std::vector<int>> t = {{0, 1, 2}, {1, 0, 0}, {2, 0, 1}};
    CHECK_THROWS_AS(Group::from_table({"0", "1", "2"}, t), Error);
  }
  SUBCASE("S3 preset is non-abelian of order 6") {
    auto g = zoo::s3();
    CHECK(g->order() == 6);
    CHECK_FALSE(g->abelian());
    for (Elem a = 0; a < 6; ++a) CHECK(g->mul(a, g->inv(a)) == g->identity());
  }
  SUBCASE("D4 and Q8 presets verify") {
    CHECK(Group::preset("D4")->order() == 8);
    CHECK_FALSE(Group::preset("D4")->abelian());
    CHECK(Group::preset("Q8")->order() == 8);
    CHECK_FALSE(Group::preset("Q8")->abelian());
  }
}

TEST_CASE("direct products") {
  auto z2 = zoo::z2();
  SUBCASE("Klein four-group") {
    auto k4 = Group::product(z2, z2);
    CHECK(k4->order() == 4);
    CHECK(k4->abelian());
    CHECK(k4->mul(1, 3) == 2);  // (0,1)+(1,1) = (1,0)
  }
  SUBCASE("Z2 x S3 is non-abelian of order 12") {
    auto g = Group::product(z2, zoo::s3());
    CHECK(g->order() == 12);
    CHECK_FALSE(g->abelian());
  }
  SUBCASE("product with the trivial group is a relabeled copy") {
    auto g = Group::product(zoo::s3(), Group::preset("trivial"));
    REQUIRE(g->order() == 6);
    for (Elem a = 0; a < 6; ++a)
      for (Elem b = 0; b < 6; ++b) CHECK(g->mul(a, b) == zoo::s3()->mul(a, b));
  }
  SUBCASE("projections recover the factors") {
    auto g = Group::product(z2, zoo::s3());
    for (Elem a = 0; a < 6; ++a)
      for (Elem b = 0; b < 6; ++b) {
        const Elem ea = g->compose({0, a}), eb = g->compose({0, b});
        CHECK(g->component(g->mul(ea, eb), 1) == zoo::s3()->mul(a, b));
      }
  }
}

TEST_CASE("power groups") {
  SUBCASE("Z2^2 acts componentwise") {
    auto g = Group::power(zoo::z2(), 2);
    CHECK(g->order() == 4);
    CHECK(g->mul(1, 3) == 2);
  }
  SUBCASE("Z3^3 has order 27") { CHECK(Group::power(zoo::z3(), 3)->order() == 27); }
  SUBCASE("the order limit rejects huge powers") {
    GroupLimits lim;
    lim.max_order = 1 << 20;
    try {
      Group::power(zoo::z2(), 40, lim);
      FAIL("expected PowerTooLarge");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::PowerTooLarge);
    }
  }
  SUBCASE("large powers are lazy but correct") {
    GroupLimits lim;
    lim.table_cap = 8;  // force the componentwise path
    auto lazy = Group::power(zoo::z2(), 4, lim);
    auto dense = Group::power(zoo::z2(), 4);
    for (Elem a = 0; a < 16; ++a) {
      CHECK(lazy->inv(a) == dense->inv(a));
      for (Elem b = 0; b < 16; ++b) CHECK(lazy->mul(a, b) == dense->mul(a, b));
    }
  }
}

TEST_CASE("subgroups") {
  SUBCASE("closure of {2} in Z4") {
    auto h = subgroup_closure(zoo::z4(), {2});
    CHECK(h.members == std::vector<Elem>{0, 2});
  }
  SUBCASE("empty seed gives the trivial subgroup") {
    auto h = subgroup_closure(zoo::s3(), {});
    CHECK(h.members == std::vector<Elem>{zoo::s3()->identity()});
  }
  SUBCASE("a transposition generates an order-2 subgroup of S3") {
    auto g = zoo::s3();
    Elem transposition = -1;
    for (Elem a = 1; a < 6; ++a)
      if (g->mul(a, a) == g->identity()) {
        transposition = a;
        break;
      }
    REQUIRE(transposition >= 0);
    CHECK(subgroup_closure(g, {transposition}).size() == 2);
  }
  SUBCASE("closure is idempotent") {
    for (const char* name : {"Z4", "Z6", "S3", "D4", "Q8"}) {
      auto g = Group::preset(name);
      auto h = subgroup_closure(g, {1, g->order() - 1});
      CHECK(subgroup_closure(g, h.members).members == h.members);
    }
  }
}

TEST_CASE("subgroup images") {
  auto z2 = zoo::z2();
  auto k4 = Group::product(z2, z2);
  SUBCASE("first coordinate of the diagonal is all of Z2") {
    Subgroup diag{k4, {0, 3}};
    std::vector<Elem> first_coord = {0, 0, 1, 1};
    auto img = subgroup_image(diag, first_coord, z2);
    CHECK(img.members == std::vector<Elem>{0, 1});
  }
  SUBCASE("doubling collapses {0,2} in Z4") {
    Subgroup h{zoo::z4(), {0, 2}};
    std::vector<Elem> dbl = {0, 2, 0, 2};
    CHECK(subgroup_image(h, dbl, zoo::z4()).members == std::vector<Elem>{0});
  }
  SUBCASE("second coordinate of the full Klein group is Z2") {
    auto img = subgroup_image(full_subgroup(k4), {0, 1, 0, 1}, z2);
    CHECK(img.members == std::vector<Elem>{0, 1});
  }
  SUBCASE("non-homomorphisms are rejected with a witness") {
    Subgroup h = full_subgroup(zoo::z4());
    std::vector<Elem> not_hom = {0, 1, 1, 1};
    CHECK_THROWS_AS(subgroup_image(h, not_hom, zoo::z4()), Error);
  }
  SUBCASE("image order divides the subgroup order") {
    auto g = zoo::s3();
    std::vector<Elem> sign(6);
    for (Elem a = 0; a < 6; ++a)
      sign[static_cast<std::size_t>(a)] = (a != 0 && g->mul(a, a) == g->identity()) ? 1 : 0;
    auto img = subgroup_image(full_subgroup(g), sign, zoo::z2());
    CHECK(img.size() == 2);
    CHECK(6 % img.size() == 0);
  }
}

TEST_CASE("subgroup check witnesses") {
  auto z4 = zoo::z4();
  SUBCASE("a closed set passes") { CHECK(check_subgroup(z4, {0, 2}).closed); }
  SUBCASE("a non-closed set yields a product witness") {
    auto chk = check_subgroup(z4, {0, 1});
    REQUIRE_FALSE(chk.closed);
    const Elem prod = z4->mul(chk.witness_a, chk.witness_b);
    CHECK((chk.witness_a == 0 || chk.witness_a == 1));
    CHECK((chk.witness_b == 0 || chk.witness_b == 1));
    CHECK_FALSE((prod == 0 || prod == 1));
  }
}
