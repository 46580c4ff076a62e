// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "sphstab/cells.hpp"
#include "sphstab/densities.hpp"
#include "sphstab/experiment.hpp"
#include "sphstab/lemmas.hpp"
#include "sphstab/lpbound.hpp"
#include "sphstab/polytopes.hpp"

using namespace sphstab;

namespace {

const double kPhiI = 0.5 * std::acos(1.0 / std::sqrt(5.0));
const double kPhiQ = kPi / 10.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double rel(double a, double b) { return std::abs(a / b - 1.0); }

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s criterion %d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

void guarded(int id, const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

void icosahedron_density() {
  const auto start = Clock::now();
  const std::vector<double> t{kPhiI, circumradius_rj(2, kPhiI)};
  const double volume = orthoscheme_volume(t);
  const double d = delta(t);
  const double elapsed = seconds_since(start);
  const double ev = std::abs(volume - kPi / 30.0), ed = std::abs(d - 3.0 / kPi);
  report(1, "icosahedron orthoscheme", ev <= 1e-9 && ed <= 1e-9 && elapsed < 1.0,
         fmt("|vol - pi/30| = %.2e, |Delta - 3/pi| = %.2e, %.3f s", ev, ed, elapsed));
}

void cell600_density() {
  const auto start = Clock::now();
  const std::vector<double> t = regular_parameters(4, kPhiQ);
  const double volume = orthoscheme_volume(t);
  const double d = delta(t);
  const double elapsed = seconds_since(start);
  const double ev = rel(volume, kPi * kPi / 7200.0), ed = rel(d, 60.0 / (kPi * kPi));
  report(2, "600-cell orthoscheme", ev <= 1e-5 && ed <= 1e-5 && elapsed < 60.0,
         fmt("rel vol err %.2e, rel Delta err %.2e, %.3f s", ev, ed, elapsed));
}

void simplex_bounds() {
  const double b3 = simplex_bound(3, kPhiI), b4 = simplex_bound(4, kPhiQ);
  const double e3 = std::abs(b3 - 12.0), e4 = rel(b4, 120.0);
  report(3, "simplex bound", e3 <= 1e-7 && e4 <= 1e-4,
         fmt("d=3: %.12g (err %.2e), d=4: %.10g (rel err %.2e)", b3, e3, b4, e4));
}

void lp_bounds() {
  bool ok = true;
  double worst_cross = 0.0, worst_margin = 1e300;
  for (int d = 2; d <= 8; ++d) {
    const double b = lp_bound(LPCertificate::from_monomial(d, {0.0, 1.0, 1.0}, 0.0));
    worst_cross = std::max(worst_cross, std::abs(b - 2.0 * d));
    const double s = 0.9 / (2.0 * d * d - d);
    const double c = lp_bound(LPCertificate::from_monomial(d, {-s, 1.0 - s, 1.0}, s));
    worst_margin = std::min(worst_margin, 2.0 * d + 1.0 - c);
    ok = ok && c < 2.0 * d + 1.0;
  }
  ok = ok && worst_cross <= 1e-9;
  report(4, "LP bounds", ok,
         fmt("max |bound - 2d| = %.2e for d=2..8, min margin below 2n+1 = %.4f", worst_cross, worst_margin));
}

void delone_ground_truth() {
  const DeloneComplex ico = delone_complex(generate(PolytopeType::icosahedron()).vertices);
  const DeloneComplex cell = delone_complex(generate(PolytopeType::cell600()).vertices);
  const double r2 = circumradius_rj(2, kPhiI), r3 = circumradius_rj(3, kPhiQ);
  double er2 = 0.0, er3 = 0.0;
  for (const auto& c : ico.cells) er2 = std::max(er2, std::abs(c.circumradius - r2));
  for (const auto& c : cell.cells) er3 = std::max(er3, std::abs(c.circumradius - r3));
  const double ev2 = rel(ico.total_volume(), 4.0 * kPi), ev3 = rel(cell.total_volume(), 2.0 * kPi * kPi);
  const bool ok = ico.cells.size() == 20 && cell.cells.size() == 600 && er2 <= 1e-9 && er3 <= 1e-9 &&
                  ev2 <= 1e-6 && ev3 <= 1e-6;
  report(5, "Delone ground truth", ok,
         std::to_string(ico.cells.size()) + " and " + std::to_string(cell.cells.size()) + " cells, " +
             fmt("circumradius err %.2e / %.2e, volume rel err %.2e / %.2e", er2, er3, ev2, ev3));
}

std::vector<ExperimentRow> grid_rows;

void recovery_grid() {
  const auto start = Clock::now();
  ExperimentConfig c;
  c.eps = {1e-7, 1e-6, 1e-5};
  c.seeds = 50;
  c.jobs = 4;
  bool ok = true;
  std::string detail;
  auto run = [&](const PolytopeType& type, const std::function<bool(const ExperimentRow&)>& check) {
    c.type = type;
    const ExperimentResult r = run_experiment(c);
    double worst = 0.0;
    for (const auto& row : r.rows) {
      ok = ok && !row.failed() && check(row);
      worst = std::max(worst, row.ratio);
      grid_rows.push_back(row);
    }
    detail += to_string(type) + fmt(" %.3g, ", worst);
  };
  for (int d = 3; d <= 5; ++d) {
    const double cs = 9.0 * std::pow(d, 3.5), cx = 96.0 * std::pow(d, 3.0);
    run(PolytopeType::simplex(d), [&](const ExperimentRow& row) { return row.ratio <= cs; });
    run(PolytopeType::crosspolytope(d), [&](const ExperimentRow& row) { return row.ratio <= cx; });
  }
  for (auto type : {PolytopeType::icosahedron(), PolytopeType::cell600()}) {
    const int f0 = generate(type).f0;
    run(type, [&](const ExperimentRow& row) {
      return row.k == f0 && row.step1_ok.value_or(false) && row.max_deviation <= 100.0 * row.eps;
    });
  }
  const double elapsed = seconds_since(start);
  ok = ok && elapsed < 600.0;
  report(6, "recovery grid", ok,
         std::to_string(grid_rows.size()) + " rows, worst deviation/eps: " + detail + fmt("%.1f s", elapsed));
}

void lemma_suite() {
  const auto rows = default_lemma_suite();
  int gated = 0, gated_fail = 0;
  for (const auto& r : rows)
    if (r.gate) {
      ++gated;
      if (!r.pass) ++gated_fail;
    }
  const auto reports = check_geometric_inequalities(1000, 1);
  int violations = 0, instances = 0;
  for (const auto& r : reports) {
    violations += r.violations;
    instances += r.instances;
  }
  report(7, "lemma suite", gated_fail == 0 && violations == 0 && instances >= 7000,
         std::to_string(gated - gated_fail) + "/" + std::to_string(gated) + " gated rows, " +
             std::to_string(violations) + " violations in " + std::to_string(instances) + " random instances");
}

void cross_checks() {
  double worst_agreement = 0.0;
  for (const auto& row : grid_rows) worst_agreement = std::max(worst_agreement, row.agreement);
  double worst_delta = 0.0;
  int cases = 0;
  for (double t1 = 0.1; t1 < 1.5; t1 += 0.2)
    for (double t2 = t1 + 0.05; t2 < 1.55; t2 += 0.2) {
      std::vector<std::vector<double>> params{{t1, t2}};
      for (double t3 = t2 + 0.05; t3 < 1.55; t3 += 0.25) params.push_back({t1, t2, t3});
      for (const auto& t : params) {
        const Orthoscheme o = build_orthoscheme(t);
        const double solid = apex_cone_fraction(o) / orthoscheme_volume(o);
        worst_delta = std::max(worst_delta, std::abs(solid - delta_cap_ratio(t, 0.5 * t1)) / std::max(1.0, solid));
        ++cases;
      }
    }
  const bool ok = !grid_rows.empty() && worst_agreement <= 2.0 && worst_delta <= 1e-7;
  report(8, "cross-checks", ok,
         fmt("max Procrustes agreement %.4f over %g rows, max Delta form gap %.2e over %g grid points",
             worst_agreement, static_cast<double>(grid_rows.size()), worst_delta, static_cast<double>(cases)));
}

}  // namespace

int main() {
  guarded(1, "icosahedron orthoscheme", icosahedron_density);
  guarded(2, "600-cell orthoscheme", cell600_density);
  guarded(3, "simplex bound", simplex_bounds);
  guarded(4, "LP bounds", lp_bounds);
  guarded(5, "Delone ground truth", delone_ground_truth);
  guarded(6, "recovery grid", recovery_grid);
  guarded(7, "lemma suite", lemma_suite);
  guarded(8, "cross-checks", cross_checks);
  return failures == 0 ? 0 : 1;
}
