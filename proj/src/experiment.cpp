#include "sphstab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "sphstab/errors.hpp"
#include "sphstab/recovery.hpp"

namespace sphstab {

namespace {

constexpr int kRedraws = 100;
constexpr int kShrinks = 50;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Unit tangent direction at x and the step angle (before any shrinking).
std::pair<Vec, double> draw_step(std::mt19937_64& rng, const Vec& x, double eps, PerturbationMode mode) {
  std::normal_distribution<double> normal;
  const int d = static_cast<int>(x.size());
  Vec g(d);
  double norm = 0.0;
  do {
    for (int i = 0; i < d; ++i) g[i] = normal(rng);
    g -= g.dot(x) * x;
    norm = g.norm();
  } while (norm < 1e-12);
  double theta = 0.0;
  if (mode == PerturbationMode::TangentUniform) {
    theta = eps * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  } else {
    // Isotropic tangent Gaussian with mean step about eps / 2, truncated at eps.
    theta = std::min(eps, 0.5 * eps * norm / std::sqrt(d - 1.0));
  }
  return {g / norm, theta};
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

ExperimentRow run_row(const ExperimentConfig& config, const PolytopeSpec& spec, int eps_index, int replicate) {
  ExperimentRow row;
  row.kind = to_string(config.type.kind);
  row.d = config.type.dim;
  row.eps = config.eps[eps_index];
  row.eps_index = eps_index;
  row.seed = replicate;
  row.constant = spec.constants.c;
  row.certified_bound = spec.constants.c * row.eps;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Packing packing =
        perturb(spec, row.eps, stream_seed(config.seed, eps_index, replicate), config.mode);
    row.k = static_cast<int>(packing.points.size());
    row.min_separation = min_pairwise_distance(packing.points);
    const bool exploratory = row.eps > spec.constants.eps;
    const RecoveryResult rec = recover(packing.points, config.type, row.eps,
                                       exploratory ? Hypotheses::Exploratory : Hypotheses::Enforce);
    row.max_deviation = rec.max_deviation;
    row.ratio = rec.max_deviation / row.eps;
    row.certified_bound = rec.certified_bound;
    row.pass = rec.pass;
    if (!std::isnan(rec.step1_bound)) row.step1_ok = rec.step1_max_circumradius <= rec.step1_bound + kCertificationFloor;
    if (config.procrustes) {
      const ProcrustesResult pr = procrustes_align(packing.points, spec.vertices);
      row.procrustes_max_deviation = pr.max_deviation;
      const double a = rec.max_deviation + 1e-15, b = pr.max_deviation + 1e-15;
      row.agreement = std::max(a, b) / std::min(a, b);
    } else {
      row.procrustes_max_deviation = std::numeric_limits<double>::quiet_NaN();
      row.agreement = std::numeric_limits<double>::quiet_NaN();
    }
    row.status = exploratory ? "exploratory" : "ok";
  } catch (const std::exception& e) {
    row.pass = false;
    row.status = std::string("error: ") + e.what();
  }
  if (config.timing)
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

}  // namespace

std::string to_string(PerturbationMode mode) {
  return mode == PerturbationMode::TangentGaussian ? "tangent-gaussian" : "tangent-uniform";
}

PerturbationMode parse_perturbation_mode(const std::string& name) {
  if (name == "tangent-gaussian" || name == "gaussian") return PerturbationMode::TangentGaussian;
  if (name == "tangent-uniform" || name == "uniform") return PerturbationMode::TangentUniform;
  throw InputError("unknown perturbation mode '" + name + "'");
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t eps_index, std::uint64_t replicate) {
  return splitmix64(splitmix64(splitmix64(seed) ^ eps_index) ^ (replicate * 0xd1b54a32d192ed03ULL));
}

Packing perturb(const PolytopeSpec& polytope, double eps, std::uint64_t seed, PerturbationMode mode) {
  if (!(eps >= 0.0)) throw HypothesisError("perturb: eps must be non-negative");
  Packing out;
  out.dimension = polytope.type.dim;
  out.phi = polytope.phi;
  out.eps = eps;
  out.meta = {{"kind", to_string(polytope.type.kind)}, {"seed", seed}, {"mode", to_string(mode)}};
  if (eps == 0.0) {
    out.points = polytope.vertices;
    return out;
  }
  std::mt19937_64 rng(seed);
  const double min_sep = 2.0 * (polytope.phi - eps);
  for (const UnitVector& v : polytope.vertices) {
    const Vec& x = v.vec();
    bool placed = false;
    double scale = 1.0;
    for (int attempt = 0; attempt < kRedraws + kShrinks && !placed; ++attempt) {
      if (attempt >= kRedraws) scale *= 0.5;
      const auto [w, theta] = draw_step(rng, x, eps, mode);
      const double a = scale * theta;
      const UnitVector y(Vec(std::cos(a) * x + std::sin(a) * w));
      placed = std::all_of(out.points.begin(), out.points.end(),
                           [&](const UnitVector& p) { return geodesic_distance(p, y) >= min_sep; });
      if (placed) out.points.push_back(y);
    }
    if (!placed) throw HypothesisError("perturb: cannot keep the separation 2(phi - eps)");
  }
  return out;
}

void validate_config(const ExperimentConfig& config) {
  if (config.eps.empty()) throw InputError("experiment: empty eps list");
  for (double e : config.eps)
    if (!(e > 0.0) || !std::isfinite(e)) throw InputError("experiment: eps values must be positive");
  if (config.seeds < 1) throw InputError("experiment: seeds must be >= 1");
  if (config.jobs < 1) throw InputError("experiment: jobs must be >= 1");
}

int ExperimentResult::failures() const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const ExperimentRow& r) { return r.failed(); }));
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const PolytopeSpec spec = generate(config.type);
  const int n_eps = static_cast<int>(config.eps.size());
  const int total = n_eps * config.seeds;
  ExperimentResult result;
  result.config = config;
  result.rows.resize(total);

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < total; i = next++)
      result.rows[i] = run_row(config, spec, i / config.seeds, i % config.seeds);
  };
  const int jobs = std::min(config.jobs, total);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (int e = 0; e < n_eps; ++e) {
    ExperimentSummary s;
    s.eps = config.eps[e];
    for (int r = 0; r < config.seeds; ++r) {
      const ExperimentRow& row = result.rows[e * config.seeds + r];
      ++s.rows;
      if (!row.failed()) ++s.passed;
      if (row.status.rfind("error", 0) == 0) continue;
      s.max_deviation = std::max(s.max_deviation, row.max_deviation);
      s.max_ratio = std::max(s.max_ratio, row.ratio);
      if (!std::isnan(row.agreement)) s.max_agreement = std::max(s.max_agreement, row.agreement);
    }
    result.summaries.push_back(s);
  }
  return result;
}

std::string experiment_csv(const ExperimentResult& result) {
  const ExperimentConfig& c = result.config;
  std::ostringstream os;
  os << "# sphstab experiment csv v1\n";
  os << "# kind=" << to_string(c.type) << " seeds=" << c.seeds << " seed=" << c.seed
     << " mode=" << to_string(c.mode) << "\n";
  os << "kind,d,eps,seed,min_separation,k,max_deviation,ratio,constant,certified_bound,pass,"
        "procrustes_max_deviation,agreement,step1_ok,status,wall_time\n";
  for (const ExperimentRow& r : result.rows) {
    os << r.kind << ',' << r.d << ',' << format_double(r.eps) << ',' << r.seed << ','
       << format_double(r.min_separation) << ',' << r.k << ',' << format_double(r.max_deviation) << ','
       << format_double(r.ratio) << ',' << format_double(r.constant) << ','
       << format_double(r.certified_bound) << ',' << (r.pass ? 1 : 0) << ','
       << format_double(r.procrustes_max_deviation) << ',' << format_double(r.agreement) << ','
       << (r.step1_ok ? (*r.step1_ok ? "1" : "0") : "") << ',' << csv_field(r.status) << ','
       << (r.wall_time ? format_double(*r.wall_time) : "") << '\n';
  }
  const std::string kind = to_string(c.type.kind);
  for (const ExperimentSummary& s : result.summaries) {
    os << kind << ',' << c.type.dim << ',' << format_double(s.eps) << ",summary,,,"
       << format_double(s.max_deviation) << ',' << format_double(s.max_ratio) << ",,,"
       << (s.passed == s.rows ? 1 : 0) << ",," << format_double(s.max_agreement) << ",,"
       << s.passed << '/' << s.rows << " passed,\n";
  }
  return os.str();
}

}  // namespace sphstab
