#include "sphstab/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "sphstab/cells.hpp"
#include "sphstab/densities.hpp"
#include "sphstab/errors.hpp"
#include "sphstab/experiment.hpp"
#include "sphstab/lemmas.hpp"
#include "sphstab/lpbound.hpp"
#include "sphstab/packing_json.hpp"
#include "sphstab/poly_expr.hpp"
#include "sphstab/recovery.hpp"

namespace sphstab {

namespace {

using json = nlohmann::json;

// Writes the finished result: to `out` when no path is given, otherwise to a
// temporary file renamed into place so that no partial file is ever visible.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw InputError("cannot write '" + path + "'");
    f << text;
    if (!f.flush()) throw InputError("cannot write '" + path + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot write '" + path + "'");
  }
}

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json mat_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) rows.push_back(vec_json(m.row(i).transpose()));
  return rows;
}

json points_json(const std::vector<Vec>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(vec_json(p));
  return a;
}

std::string points_csv(const PointSet& pts) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& p : pts) {
    for (int i = 0; i < p.dim(); ++i) os << (i ? "," : "") << p[i];
    os << '\n';
  }
  return os.str();
}

void put_if_finite(json& j, const char* key, double x) {
  if (std::isfinite(x)) j[key] = x;
}

PolytopeType type_from(const std::string& kind, int dim) {
  return make_polytope_type(parse_polytope_kind(kind), dim);
}

json recovery_json(const RecoveryResult& r, const ProcrustesResult& pr) {
  json j = {{"kind", to_string(r.type.kind)},
            {"d", r.type.dim},
            {"eps", r.eps},
            {"constant", r.constant},
            {"certified_bound", r.certified_bound},
            {"max_deviation", r.max_deviation},
            {"pass", r.pass},
            {"deviations", r.deviations},
            {"matching", r.matching},
            {"rotation", mat_json(r.rotation)},
            {"fitted", points_json(r.fitted)}};
  put_if_finite(j, "minimax_deviation", r.minimax_deviation);
  put_if_finite(j, "step1_max_circumradius", r.step1_max_circumradius);
  put_if_finite(j, "step1_bound", r.step1_bound);
  put_if_finite(j, "duplicate_spread", r.duplicate_spread);
  put_if_finite(j, "chain_constant", r.chain_constant);
  if (r.seed_cell >= 0) j["seed_cell"] = r.seed_cell;
  j["procrustes"] = {{"max_deviation", pr.max_deviation},
                     {"matching", pr.matching},
                     {"rank_deficient", pr.rank_deficient}};
  return j;
}

json delone_json(const DeloneComplex& dc) {
  json cells = json::array();
  for (const auto& c : dc.cells) {
    json cj = {{"vertices", c.vertices},
               {"circumcenter", vec_json(c.circumcenter)},
               {"circumradius", c.circumradius}};
    put_if_finite(cj, "volume", c.volume);
    cells.push_back(cj);
  }
  json j = {{"dimension", dc.dim},
            {"cells", cells},
            {"cell_count", dc.cells.size()},
            {"max_circumradius", dc.max_circumradius},
            {"max_cell", dc.max_cell}};
  put_if_finite(j, "total_volume", dc.total_volume());
  return j;
}

std::string rows_json(const std::vector<LemmaRow>& rows) {
  json a = json::array();
  for (const auto& r : rows)
    a.push_back({{"lemma", r.lemma}, {"params", r.params}, {"lhs", r.lhs}, {"rhs", r.rhs},
                 {"slack", r.slack}, {"pass", r.pass}, {"gate", r.gate}});
  return a.dump(2) + "\n";
}

std::string format_kv_csv(const json& j) {
  std::ostringstream os;
  os.precision(17);
  os << "key,value\n";
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it->is_array() || it->is_object()) continue;
    os << it.key() << ',' << (it->is_string() ? it->get<std::string>() : it->dump()) << '\n';
  }
  return os.str();
}

void report_error(std::ostream& err, const std::string& type, const std::string& message,
                  const json& extra = json::object()) {
  json j = {{"error", type}, {"message", message}};
  j.update(extra);
  err << j.dump() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spherical packing geometry and stability checks", "sphstab"};
  app.require_subcommand(1);

  std::string kind, in_path, out_path, format, poly, mode = "tangent-uniform";
  int dim = 0, seeds = 10, jobs = 1, samples = 1000;
  double eps = 0.0, phi = 0.0, s = -1.0;
  std::uint64_t seed = 1;
  std::vector<double> eps_list{1e-7, 1e-6, 1e-5}, t_params;
  bool timing = false, no_procrustes = false;

  std::map<const CLI::App*, std::string> default_format;
  auto add_format = [&](CLI::App* c, const std::string& def) {
    c->add_option("--format", format, "Output format (default " + def + ")")
        ->check(CLI::IsMember({"json", "csv"}));
    default_format[c] = def;
  };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", out_path, "Output file (default stdout)"); };

  auto* gen = app.add_subcommand("gen-polytope", "Vertices of a regular polytope as packing JSON");
  gen->add_option("--kind", kind, "simplex | crosspolytope | icosahedron | 600-cell")->required();
  gen->add_option("--dim", dim, "Ambient dimension (simplex / crosspolytope)");
  add_out(gen);
  add_format(gen, "json");

  auto* pert = app.add_subcommand("perturb", "Perturbed polytope vertices as packing JSON");
  pert->add_option("--kind", kind)->required();
  pert->add_option("--dim", dim);
  pert->add_option("--eps", eps, "Maximal move angle")->required();
  pert->add_option("--seed", seed);
  pert->add_option("--mode", mode, "tangent-uniform | tangent-gaussian");
  add_out(pert);
  add_format(pert, "json");

  auto* rec = app.add_subcommand("recover", "Recover the regular polytope from a packing JSON");
  rec->add_option("--in", in_path, "Packing JSON")->required();
  rec->add_option("--kind", kind)->required();
  rec->add_option("--dim", dim);
  auto* rec_eps = rec->add_option("--eps", eps, "Perturbation bound (default: the packing's eps)");
  add_out(rec);
  add_format(rec, "json");

  auto* del = app.add_subcommand("delone", "Delone cells of a packing JSON or of a polytope");
  del->add_option("--in", in_path, "Packing JSON");
  del->add_option("--kind", kind);
  del->add_option("--dim", dim);
  add_out(del);
  add_format(del, "json");

  auto* den = app.add_subcommand("density", "Orthoscheme volume, Delta and the simplex bound");
  den->add_option("--kind", kind);
  den->add_option("--dim", dim);
  den->add_option("--phi", phi, "Half the minimal distance; uses t_j = r_j(phi)");
  den->add_option("--t", t_params, "Explicit orthoscheme parameters")->delimiter(',');
  add_out(den);
  add_format(den, "json");

  auto* lp = app.add_subcommand("lp-bound", "Delsarte linear-programming bound");
  lp->add_option("--dim", dim)->required();
  lp->add_option("--poly", poly, "Polynomial in t, e.g. \"(t+1)*(t-s)\"")->required();
  lp->add_option("--s", s, "f <= 0 is required on [-1, s]")->required();
  add_out(lp);
  add_format(lp, "json");

  auto* lem = app.add_subcommand("verify-lemmas", "Volume, density and geometric inequality checks");
  lem->add_option("--dim", dim);
  lem->add_option("--phi", phi);
  lem->add_option("--samples", samples, "Random instances per geometric lemma");
  lem->add_option("--seed", seed);
  add_out(lem);
  add_format(lem, "csv");

  auto* exp = app.add_subcommand("experiment", "Perturb-and-recover experiment, CSV output");
  exp->add_option("--kind", kind)->required();
  exp->add_option("--dim", dim);
  exp->add_option("--eps", eps_list, "Comma-separated eps values")->delimiter(',');
  exp->add_option("--seeds", seeds, "Replicates per eps");
  exp->add_option("--seed", seed);
  exp->add_option("--mode", mode);
  exp->add_option("--jobs", jobs, "Worker threads");
  exp->add_flag("--timing", timing, "Record wall time per row");
  exp->add_flag("--no-procrustes", no_procrustes, "Skip the Procrustes cross-check");
  add_out(exp);
  add_format(exp, "csv");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (format.empty())
    for (const auto& [sub, def] : default_format)
      if (sub->parsed()) format = def;

  try {
    if (*gen || *pert) {
      const PolytopeSpec spec = generate(type_from(kind, dim));
      Packing p;
      if (*gen) {
        p = {spec.type.dim, spec.vertices, spec.phi, 0.0, json::object()};
        p.meta = {{"kind", to_string(spec.type.kind)},
                  {"f0", spec.f0},
                  {"constant", spec.constants.c},
                  {"eps_ceiling", spec.constants.eps}};
      } else {
        p = perturb(spec, eps, seed, parse_perturbation_mode(mode));
      }
      emit(format == "csv" ? points_csv(p.points) : to_json(p).dump(2) + "\n", out_path, out);
      return kExitOk;
    }

    if (*rec) {
      const Packing p = read_packing(in_path);
      const PolytopeType type = type_from(kind, dim == 0 ? p.dimension : dim);
      if (type.dim != p.dimension)
        throw InputError("packing dimension " + std::to_string(p.dimension) + " does not match " +
                         to_string(type));
      const double e = rec_eps->count() ? eps : p.eps;
      const RecoveryResult r = recover(p.points, type, e);
      const ProcrustesResult pr = procrustes_align(p.points, generate(type).vertices);
      const json j = recovery_json(r, pr);
      emit(format == "csv" ? format_kv_csv(j) : j.dump(2) + "\n", out_path, out);
      return r.pass ? kExitOk : kExitCertification;
    }

    if (*del) {
      PointSet pts;
      if (!in_path.empty()) {
        pts = read_packing(in_path).points;
      } else if (!kind.empty()) {
        pts = generate(type_from(kind, dim)).vertices;
      } else {
        throw InputError("delone: give --in or --kind");
      }
      const int d = pts.empty() ? 0 : pts.front().dim();
      const json j = delone_json(delone_complex(pts, d <= 4));
      emit(format == "csv" ? format_kv_csv(j) : j.dump(2) + "\n", out_path, out);
      return kExitOk;
    }

    if (*den) {
      std::vector<double> t = t_params;
      double sigma = phi;
      int d = dim;
      if (!kind.empty()) {
        const PolytopeType type = type_from(kind, dim);
        d = type.dim;
        sigma = polytope_phi(type);
      }
      if (t.empty()) {
        if (d == 0 || !(sigma > 0.0)) throw InputError("density: give --t, --kind, or --dim with --phi");
        t = regular_parameters(d, sigma);
      }
      json j = {{"d", static_cast<int>(t.size()) + 1}, {"t", t}};
      j["volume"] = orthoscheme_volume(t);
      j["delta"] = delta(t);
      j["delta_cap_ratio"] = delta_cap_ratio(t, 0.5 * t[0]);
      j["bound"] = j["delta"].get<double>() * sphere_measure(static_cast<int>(t.size()) + 1);
      if (sigma > 0.0) j["phi"] = sigma;
      emit(format == "csv" ? format_kv_csv(j) : j.dump(2) + "\n", out_path, out);
      return kExitOk;
    }

    if (*lp) {
      const LPCertificate cert = LPCertificate::from_monomial(dim, parse_polynomial(poly, s), s);
      const double bound = lp_bound(cert);
      const json j = {{"dim", dim}, {"s", s}, {"coefficients", cert.coeffs}, {"bound", bound},
                      {"floor", std::floor(bound + 1e-9)}};
      emit(format == "csv" ? format_kv_csv(j) : j.dump(2) + "\n", out_path, out);
      return kExitOk;
    }

    if (*lem) {
      std::vector<LemmaRow> rows;
      if (dim != 0 || phi != 0.0) {
        rows = verify_volume_lemmas(phi, dim, default_eps_grid(), default_gammas());
      } else {
        rows = default_lemma_suite();
        for (const auto& rep : check_geometric_inequalities(samples, seed)) {
          LemmaRow r;
          r.lemma = rep.lemma;
          r.params = "samples=" + std::to_string(rep.instances);
          r.lhs = rep.violations;
          r.rhs = 0.0;
          r.slack = rep.min_slack;
          r.pass = rep.pass();
          rows.push_back(r);
        }
      }
      emit(format == "csv" ? lemma_csv(rows) : rows_json(rows), out_path, out);
      const bool ok = std::all_of(rows.begin(), rows.end(), [](const LemmaRow& r) { return r.pass || !r.gate; });
      return ok ? kExitOk : kExitCertification;
    }

    if (*exp) {
      if (format != "csv") throw InputError("experiment output is CSV");
      ExperimentConfig config;
      config.type = type_from(kind, dim);
      config.eps = eps_list;
      config.seeds = seeds;
      config.seed = seed;
      config.mode = parse_perturbation_mode(mode);
      config.out = out_path;
      config.jobs = jobs;
      config.timing = timing;
      config.procrustes = !no_procrustes;
      validate_config(config);
      const double ceiling = stability_constants(config.type).eps;
      for (double e : config.eps)
        if (e > ceiling)
          err << "warning: eps " << e << " exceeds the hypothesis ceiling " << ceiling
              << "; rows are tagged exploratory\n";
      const ExperimentResult result = run_experiment(config);
      emit(experiment_csv(result), out_path, out);
      if (!out_path.empty())
        for (const auto& sm : result.summaries)
          out << "eps=" << sm.eps << " passed=" << sm.passed << "/" << sm.rows << " max_ratio=" << sm.max_ratio
              << "\n";
      return result.failures() == 0 ? kExitOk : kExitCertification;
    }
  } catch (const CertificateError& e) {
    report_error(err, "CertificateError", e.what(), {{"violating_t", e.violating_t()}});
    return kExitCertification;
  } catch (const StructuralViolation& e) {
    report_error(err, "StructuralViolation", e.what());
    return kExitCertification;
  } catch (const HypothesisError& e) {
    report_error(err, "HypothesisError", e.what());
    return kExitUsage;
  } catch (const DimensionError& e) {
    report_error(err, "DimensionError", e.what());
    return kExitUsage;
  } catch (const DomainError& e) {
    report_error(err, "DomainError", e.what());
    return kExitUsage;
  } catch (const InputError& e) {
    report_error(err, "InputError", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    report_error(err, "Error", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace sphstab
