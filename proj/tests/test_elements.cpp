#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "noongen/elements.hpp"

using namespace noongen;
using test_helpers::close;
using test_helpers::occ;

namespace {

CoincidenceTable diagonal_table(std::initializer_list<std::pair<int, Cplx>> diag,
                                int l_max) {
  CoincidenceTable t;
  t.l_max = l_max;
  for (const auto& [l, v] : diag) t.entries[TableKey{-l, 0, l, 0}] = v;
  return t;
}

CoincidenceTable gaussian_table(int l_max) {
  const PumpSpec pump = PumpSpec::make({{LgMode{0, 0, 1.0}, Cplx{1.0, 0.0}}});
  return coincidence_table(pump, l_max, 0, Waists{1.0, 1.0, 1.0}, QuadratureSpec{});
}

}  // namespace

TEST_CASE("Projector validation and normalization") {
  Projector p{Path::D, {{1, Cplx{1.0, 0.0}}, {1, Cplx{0.5, 0.0}}}, false};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  Projector empty{Path::A, {}, false};
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
  Projector bad_path{Path::B, {{0, Cplx{1.0, 0.0}}}, false};
  CHECK_THROWS_AS(bad_path.validate(), std::invalid_argument);

  Projector two{Path::D, {{-1, Cplx{1.0, 0.0}}, {-2, Cplx{0.0, -1.0}}}, false};
  const Projector unit = two.normalized_copy();
  CHECK(close(unit.weight_norm(), 1.0));
  CHECK(close(unit.weight_for(-2), Cplx{0.0, -1.0 / std::sqrt(2.0)}));
  CHECK(close(unit.weight_for(7), Cplx{0.0, 0.0}));
}

TEST_CASE("SPDC on vacuum creates one pair per table entry") {
  const auto table = gaussian_table(1);
  const FockState psi1 = apply_spdc(FockState::vacuum(), table, Path::A, Path::B);
  CHECK(psi1.term_count() == 3);
  for (int l = -1; l <= 1; ++l) {
    const Cplx expected = table.at(-l, l);
    CHECK(close(psi1.amplitude(occ({{ModeLabel{Path::A, -l}, 1},
                                    {ModeLabel{Path::B, l}, 1}})),
                expected));
  }
}

TEST_CASE("two crystals produce the four-photon seeded terms") {
  const auto table = diagonal_table({{1, Cplx{0.8, 0.0}}, {2, Cplx{0.5, 0.1}}}, 2);
  const FockState psi1 = apply_spdc(FockState::vacuum(), table, Path::A, Path::B);
  const FockState psi2 = apply_spdc(psi1, table, Path::A, Path::C);
  CHECK(psi2.term_count() == 4);
  // Monomial coefficients read gamma * C directly, including the doubly
  // seeded A mode where the Fock amplitude carries sqrt(2).
  const auto monomials = monomial_coefficients(psi2);
  const Cplx c1 = table.at(-1, 1), c2 = table.at(-2, 2);
  CHECK(close(monomials.at(occ({{ModeLabel{Path::A, -1}, 2},
                                {ModeLabel{Path::B, 1}, 1},
                                {ModeLabel{Path::C, 1}, 1}})),
              c1 * c1));
  CHECK(close(psi2.amplitude(occ({{ModeLabel{Path::A, -1}, 2},
                                  {ModeLabel{Path::B, 1}, 1},
                                  {ModeLabel{Path::C, 1}, 1}})),
              std::sqrt(2.0) * c1 * c1));
  CHECK(close(monomials.at(occ({{ModeLabel{Path::A, -1}, 1},
                                {ModeLabel{Path::A, -2}, 1},
                                {ModeLabel{Path::B, 1}, 1},
                                {ModeLabel{Path::C, 2}, 1}})),
              c1 * c2));
}

TEST_CASE("single-entry table maps each input term to one output term") {
  const auto table = diagonal_table({{0, Cplx{1.0, 0.0}}}, 0);
  std::mt19937_64 rng(3);
  const FockState in = test_helpers::random_state(rng, 2, 5);
  const FockState out = apply_spdc(in, table, Path::A, Path::B);
  CHECK(out.term_count() == in.term_count());
}

TEST_CASE("SPDC sign convention and input checking") {
  CoincidenceTable keyed_positive;
  keyed_positive.l_max = 1;
  keyed_positive.entries[TableKey{1, 0, 1, 0}] = Cplx{1.0, 0.0};
  const FockState negated = apply_spdc(FockState::vacuum(), keyed_positive, Path::A,
                                       Path::B, SignalSign::negated);
  CHECK(close(negated.amplitude(occ({{ModeLabel{Path::A, -1}, 1},
                                     {ModeLabel{Path::B, 1}, 1}})),
              Cplx{1.0, 0.0}));

  CHECK_THROWS_AS(apply_spdc(FockState::vacuum(), CoincidenceTable{}, Path::A, Path::B),
                  DegenerateError);
  CHECK_THROWS_AS(apply_spdc(FockState::vacuum(), keyed_positive, Path::A, Path::A),
                  std::invalid_argument);
  CoincidenceTable radial;
  radial.l_max = 1;
  radial.p_max = 1;
  radial.entries[TableKey{1, 1, -1, 0}] = Cplx{1.0, 0.0};
  CHECK_THROWS_AS(apply_spdc(FockState::vacuum(), radial, Path::A, Path::B),
                  std::invalid_argument);
}

TEST_CASE("beam splitter on a single photon") {
  const FockState in = apply_creation(FockState::vacuum(), ModeLabel{Path::A, 2});
  const FockState out = apply_beamsplitter(in, Path::A, Path::D);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(out.term_count() == 2);
  CHECK(close(out.amplitude(occ({{ModeLabel{Path::A, 2}, 1}})), Cplx{s, 0.0}));
  CHECK(close(out.amplitude(occ({{ModeLabel{Path::D, 2}, 1}})), Cplx{0.0, -s}));
}

TEST_CASE("beam splitter two-photon binomial, hand expanded") {
  // (a - i d)^2 / 2 = a^2/2 - i a d - d^2/2 as monomials.
  const ModeLabel am{Path::A, 1}, dm{Path::D, 1};
  FockState in;
  in.accumulate(occ({{am, 2}}), Cplx{std::sqrt(2.0), 0.0});  // monomial coefficient 1
  const auto monomials = monomial_coefficients(apply_beamsplitter(in, Path::A, Path::D));
  CHECK(monomials.size() == 3);
  CHECK(close(monomials.at(occ({{am, 2}})), Cplx{0.5, 0.0}));
  CHECK(close(monomials.at(occ({{am, 1}, {dm, 1}})), Cplx{0.0, -1.0}));
  CHECK(close(monomials.at(occ({{dm, 2}})), Cplx{-0.5, 0.0}));
}

TEST_CASE("beam splitter inverse restores the input") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 8; ++trial) {
    const FockState in = test_helpers::random_state(rng, 1 + trial % 4, 5);
    const FockState round =
        apply_beamsplitter_inverse(apply_beamsplitter(in, Path::B, Path::C), Path::B,
                                   Path::C);
    CHECK(close(norm(scale_add({{Cplx{1.0, 0.0}, round}, {Cplx{-1.0, 0.0}, in}})), 0.0,
                1e-12));
  }
}

TEST_CASE("beam splitter is unitary and conserves photon number") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int photons = 1 + trial % 4;
    const FockState in = test_helpers::random_state(rng, photons, 6);
    const FockState out = apply_beamsplitter(in, Path::A, Path::D);
    CHECK(close(norm(out), norm(in), 1e-12));
    for (const auto& [o, amp] : out.terms()) CHECK(total_photons(o) == photons);
  }
}

TEST_CASE("beam splitter acts identically on every OAM index") {
  for (const int l : {-3, 0, 5}) {
    const FockState in = apply_creation(FockState::vacuum(), ModeLabel{Path::B, l});
    const FockState out = apply_beamsplitter(in, Path::B, Path::C);
    CHECK(close(out.amplitude(occ({{ModeLabel{Path::B, l}, 1}})),
                Cplx{1.0 / std::sqrt(2.0), 0.0}));
    CHECK(close(out.amplitude(occ({{ModeLabel{Path::C, l}, 1}})),
                Cplx{0.0, -1.0 / std::sqrt(2.0)}));
  }
}

TEST_CASE("coincidence filter") {
  const auto table = diagonal_table({{1, Cplx{1.0, 0.0}}, {2, Cplx{1.0, 0.0}}}, 2);
  const FockState psi2 = apply_spdc(
      apply_spdc(FockState::vacuum(), table, Path::A, Path::B), table, Path::A, Path::C);
  const FockState psi3 = apply_beamsplitter(apply_beamsplitter(psi2, Path::A, Path::D),
                                            Path::B, Path::C);
  const PathRequirement req[] = {{Path::A, 1}, {Path::D, 1}};
  const FockState filtered = coincidence_filter(psi3, req);
  CHECK(!filtered.is_zero());
  for (const auto& [o, amp] : filtered.terms()) {
    CHECK(photons_on_path(o, Path::A) == 1);
    CHECK(photons_on_path(o, Path::D) == 1);
  }
  // Idempotent.
  const FockState again = coincidence_filter(filtered, req);
  CHECK(again.terms() == filtered.terms());

  const PathRequirement impossible[] = {{Path::A, 4}};
  CHECK(coincidence_filter(psi3, impossible).is_zero());
  CHECK(coincidence_filter(psi3, {}).terms() == psi3.terms());
}

TEST_CASE("herald on single-mode projectors yields the two-term N00N form") {
  const int m = 1;
  const auto table = diagonal_table({{m, Cplx{1.0, 0.0}}}, 1);
  const FockState psi2 = apply_spdc(
      apply_spdc(FockState::vacuum(), table, Path::A, Path::B), table, Path::A, Path::C);
  const FockState psi3 = apply_beamsplitter(apply_beamsplitter(psi2, Path::A, Path::D),
                                            Path::B, Path::C);
  const PathRequirement req[] = {{Path::A, 1}, {Path::D, 1}};
  const FockState filtered = coincidence_filter(psi3, req);

  const Projector pd{Path::D, {{-m, Cplx{1.0, 0.0}}}, false};
  const Projector pa{Path::A, {{-m, Cplx{1.0, 0.0}}}, false};
  const HeraldResult hr = herald(filtered, pd, pa);

  CHECK(hr.residual.term_count() == 2);
  const Cplx bb = hr.residual.amplitude(occ({{ModeLabel{Path::B, m}, 2}}));
  const Cplx cc = hr.residual.amplitude(occ({{ModeLabel{Path::C, m}, 2}}));
  CHECK(close(bb, cc, 1e-14));
  CHECK(close(hr.success_norm, norm(hr.residual)));
  CHECK(close(norm(hr.normalized), 1.0));

  // Projecting on an absent OAM index heralds the zero state.
  const Projector off{Path::D, {{5, Cplx{1.0, 0.0}}}, false};
  const HeraldResult miss = herald(filtered, off, pa);
  CHECK(miss.residual.is_zero());
  CHECK(miss.success_norm == 0.0);

  // Contract violation: psi3 still holds terms with two photons in A.
  CHECK_THROWS_AS(herald(psi3, pd, pa), std::invalid_argument);
  // Projection contracts.
  CHECK(hr.success_norm <= norm(filtered) + 1e-12);
}
