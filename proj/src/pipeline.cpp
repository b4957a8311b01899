#include "lpiso/pipeline.hpp"

#include "lpiso/classifier.hpp"
#include "lpiso/error.hpp"
#include "lpiso/operators.hpp"
#include "lpiso/solutions.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#ifndef LPISO_VERSION
#define LPISO_VERSION "dev"
#endif

namespace lpiso {

using nlohmann::json;

namespace {

std::vector<std::vector<double>> rows(const Matrix& m) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)].push_back(m(i, j));
  return out;
}

std::vector<double> entries(const Vector& v) { return {v.data(), v.data() + v.size()}; }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Report start(const char* command, const ProblemConfig& cfg) {
  Report r;
  r.command = command;
  r.status = "ok";
  r.provenance = {cfg.seed, LPISO_VERSION, config_hash(cfg.source)};
  return r;
}

DiagonalizationSummary summarize(const std::string& name, const SymMatrix& A, const Diagonalization& d) {
  return {name, d.dim(), d.ell, d.signature, rows(d.M), diagonalization_residual(A, d)};
}

double require_p(const ProblemConfig& cfg) {
  if (!cfg.p) throw Error(ErrorCode::ConfigError, "config.p: missing");
  return *cfg.p;
}

const Matrix& require_B(const ProblemConfig& cfg) {
  if (!cfg.B) throw Error(ErrorCode::ConfigError, "config.B: missing");
  return *cfg.B;
}

std::optional<FamilyDefaults> family_defaults(const Verdict& v) {
  if (!v.embeddable || !v.family_case) return std::nullopt;
  return FamilyDefaults{v.c(0), v.d(0), v.family_sign};
}

json verdict_details(const Verdict& v) {
  json j;
  j["n"] = v.n;
  j["ell"] = v.ell;
  j["m"] = v.m;
  j["c"] = entries(v.c);
  j["d"] = entries(v.d);
  j["zero_threshold"] = v.zero_threshold;
  j["vector_condition_required"] = v.vector_condition;
  j["exceptional_exponent"] = v.exceptional_exponent;
  if (v.family_case) {
    j["family_case"] = std::string(to_string(*v.family_case));
    j["family_branch"] = v.family_sign > 0 ? "upper" : "lower";
  }
  return j;
}

json norm_json(const NormEstimate& e) {
  return {{"value", e.value}, {"std_error", e.std_error}, {"integral", e.integral},
          {"method", std::string(to_string(e.method))}, {"samples", e.samples}};
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "diagonalize") return Command::Diagonalize;
  if (name == "classify") return Command::Classify;
  if (name == "certify") return Command::Certify;
  if (name == "family-eval") return Command::FamilyEval;
  return std::nullopt;
}

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Diagonalize: return "diagonalize";
    case Command::Classify: return "classify";
    case Command::Certify: return "certify";
    case Command::FamilyEval: return "family-eval";
  }
  return "?";
}

int exit_code_for(ErrorCode code) noexcept { return is_numeric_precondition(code) ? 2 : 1; }

Report cmd_diagonalize(const ProblemConfig& cfg) {
  Report r = start("diagonalize", cfg);
  const SymMatrix A(cfg.A);
  const Diagonalization dA = diagonalize(A);
  r.diagonalizations.push_back(summarize("A", A, dA));
  if (cfg.B) {
    const SymMatrix B(*cfg.B);
    r.diagonalizations.push_back(summarize("B", B, diagonalize(B)));
  }
  for (const auto& d : r.diagonalizations) {
    r.checks.push_back({"residual " + d.name, d.residual <= 1e-10, d.residual, 1e-10, "max |M^T A M - I_l|"});
  }
  return r;
}

Report cmd_classify(const ProblemConfig& cfg) {
  Report r = start("classify", cfg);
  const double p = require_p(cfg);
  const SymMatrix A(cfg.A);
  const SymMatrix B(require_B(cfg));
  const Verdict v = classify(A, cfg.a, B, *cfg.b, p);
  r.verdict = v.tag();
  r.rule = v.rule;
  r.diagonalizations.push_back(summarize("A", A, v.source));
  r.diagonalizations.push_back(summarize("B", B, v.target));
  r.details["classification"] = verdict_details(v);
  return r;
}

Report cmd_certify(const ProblemConfig& cfg) {
  Report r = start("certify", cfg);
  const double p = require_p(cfg);
  const SymMatrix A(cfg.A);
  const SymMatrix B(require_B(cfg));
  if (!cfg.E1 || !cfg.E2) throw Error(ErrorCode::ConfigError, "config: certify needs E1 and E2");
  if (!cfg.witness) throw Error(ErrorCode::ConfigError, "config.witness: missing");

  const Verdict v = classify(A, cfg.a, B, *cfg.b, p);
  r.verdict = v.tag();
  r.rule = v.rule;
  r.diagonalizations.push_back(summarize("A", A, v.source));
  r.diagonalizations.push_back(summarize("B", B, v.target));
  r.details["classification"] = verdict_details(v);
  if (!v.embeddable) {
    r.status = "fail";
    r.exit_code = 3;
    r.message = "no witness can exist: " + v.tag();
    return r;
  }

  const MappingSpec tau = build_mapping(cfg.witness->mapping, cfg.n, v.m, p, family_defaults(v));
  const DomainSpec E2 = cfg.E2->build();
  WitnessParams params{tau, cfg.witness->sign, std::nullopt};
  if (cfg.witness->unit_weight) params.weight = ScalarField::constant(1.0);

  DomainSpec E1 = [&] {
    if (cfg.E1->kind != DomainConfig::Kind::WitnessImage) return cfg.E1->build();
    const auto probe = assemble(v.source, v.target, tau, p, params.sign, E2, params.weight);
    DomainSpec img = image_of(probe, E2);
    if (cfg.E1->margin) img.set_margin(*cfg.E1->margin);
    return img;
  }();

  const Witness w = instantiate_witness(v, E1, E2, params, p);
  const auto& T = w.op;

  const Reduction red = reduce(A, cfg.a, E1, p);
  const SolutionSet S = pull_back(sample_solutions(red.op, red.domain, cfg.solution_budget, cfg.seed), red.P);
  const PdeMappingReport pde =
      certify_pde_mapping(T, OperatorSpec{B.matrix(), *cfg.b}, S, E2, cfg.pde_tolerance, cfg.pde_points, cfg.seed);
  const IsometryReport iso = certify_isometry(T, S, E1, E2, cfg.quadrature);
  const WeightCheck wc = check_weight(T, E2);

  r.checks.push_back({"coincidence", w.coincidence.passed, std::min(w.coincidence.forward, w.coincidence.backward), 0.999,
                      "share of samples matched in both directions"});
  if (w.vector_condition) {
    r.checks.push_back({"vector condition", *w.vector_condition, *w.vector_condition_residual, 1e-8 * (1.0 + v.c.norm()),
                        "|J d - |tau'|^(2/n) c|"});
  }
  r.checks.push_back({"weight consistency", wc.max_weight_error <= 1e-6, wc.max_weight_error, 1e-6,
                      "max | |F|^p / |tau'| - 1 |"});
  r.checks.push_back({"conformality", wc.max_conformal_error && *wc.max_conformal_error <= 1e-6,
                      wc.max_conformal_error ? *wc.max_conformal_error : 1.0, 1e-6,
                      wc.max_conformal_error ? "max | |C| / |tau'|^(2/n) - 1 |" : "J^T I_l J is not a multiple of I_l"});
  r.checks.push_back({"pde mapping", pde.passed, pde.max_relative_residual, pde.tolerance,
                      "max |D_B(Tf)| / (1 + term scale); max absolute " + fmt(pde.max_residual)});
  double worst_ratio = 0.0;
  for (const auto& np : iso.pairs) worst_ratio = std::max(worst_ratio, np.difference / np.tolerance);
  r.checks.push_back({"isometry (" + iso.mode + ")", iso.passed, worst_ratio, 1.0,
                      "max |‖Tf‖ - ‖f‖| / tolerance over the solution set"});

  json ops;
  ops["mapping"] = T.tau.describe();
  ops["weight"] = T.weight_description;
  ops["custom_weight"] = T.custom_weight;
  ops["sign"] = T.sign;
  ops["p"] = T.p;
  ops["scale"] = T.scale;
  ops["P"] = rows(T.P);
  ops["Q"] = rows(T.Q);
  r.details["operator"] = ops;
  r.details["domains"] = {{"E1", E1.describe()}, {"E2", E2.describe()}};
  r.details["coincidence"] = {{"forward", w.coincidence.forward}, {"backward", w.coincidence.backward},
                              {"samples", w.coincidence.samples}};
  json pj = {{"max_residual", pde.max_residual}, {"max_relative_residual", pde.max_relative_residual},
             {"tolerance", pde.tolerance}, {"points", pde.points}, {"solutions", json::array()}};
  for (std::size_t k = 0; k < S.size(); ++k) {
    pj["solutions"].push_back({{"label", S.members[k].label}, {"max_relative_residual", pde.per_solution[k]}});
  }
  r.details["pde_mapping"] = pj;
  json ij = {{"mode", iso.mode}, {"pairs", json::array()}};
  for (const auto& np : iso.pairs) {
    ij["pairs"].push_back({{"label", np.label}, {"source", norm_json(np.source)}, {"image", norm_json(np.image)},
                           {"difference", np.difference}, {"tolerance", np.tolerance}, {"passed", np.passed}});
  }
  r.details["isometry"] = ij;
  r.details["weight_check"] = {{"max_weight_error", wc.max_weight_error}, {"points", wc.points}};
  r.details["quadrature"] = {{"method", std::string(to_string(cfg.quadrature.method))},
                             {"points", cfg.quadrature.points}, {"order", cfg.quadrature.order}};

  bool ok = true;
  for (const auto& c : r.checks) ok = ok && c.passed;
  r.status = ok ? "pass" : "fail";
  r.exit_code = ok ? 0 : 3;
  r.details["summary"] = {{"passed", ok}, {"solutions", S.size()}, {"pde_max_residual", pde.max_residual}};
  return r;
}

Report cmd_family_eval(const ProblemConfig& cfg) {
  Report r = start("family-eval", cfg);
  if (!cfg.witness) throw Error(ErrorCode::ConfigError, "config.witness: missing");
  const int n = cfg.n;

  std::optional<Verdict> v;
  if (cfg.B && cfg.p) v = classify(SymMatrix(cfg.A), cfg.a, SymMatrix(*cfg.B), *cfg.b, *cfg.p);
  const bool is_family = cfg.witness->mapping.kind == MappingConfig::Kind::Family;
  if (is_family && !cfg.p) throw Error(ErrorCode::ConfigError, "config.p: missing (needed by 2D families)");
  const int ell = v ? v->m : (is_family ? 1 : n);
  const MappingSpec tau =
      build_mapping(cfg.witness->mapping, n, ell, cfg.p.value_or(1.0), v ? family_defaults(*v) : std::nullopt);
  if (v) {
    r.verdict = v->tag();
    r.rule = v->rule;
  }

  // Grid in the coordinates τ acts on.
  std::optional<WeightedCompositionOperator> T;
  Vector lo, hi;
  if (cfg.grid) {
    lo = cfg.grid->lo;
    hi = cfg.grid->hi;
  } else if (cfg.E2) {
    DomainSpec reduced = cfg.E2->build();
    if (v) reduced = DomainSpec::affine_image(reduced, v->target.reduction(), Vector::Zero(n));
    lo = reduced.center() - Vector::Constant(n, reduced.diameter() / 2.0);
    hi = reduced.center() + Vector::Constant(n, reduced.diameter() / 2.0);
  } else {
    throw Error(ErrorCode::ConfigError, "config: family-eval needs a grid or E2");
  }
  if (v && cfg.E2 && cfg.p) {
    try {
      T = assemble(v->source, v->target, tau, *cfg.p, cfg.witness->sign, cfg.E2->build());
    } catch (const Error&) {
    }
  }
  const MappingSpec map = T ? T->tau : tau;
  std::vector<int> counts = cfg.grid ? cfg.grid->points : std::vector<int>(static_cast<std::size_t>(n), 21);

  const double sigma = map.is<TwoDFamily>() && map.as<TwoDFamily>().variant == FamilyVariant::B ? -1.0 : 1.0;
  std::size_t total = 1;
  for (int c : counts) total *= static_cast<std::size_t>(c);
  json pts = json::array();
  std::size_t singular = 0;
  double max_system = 0.0;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (std::size_t t = 0; t < total; ++t) {
    Vector x(n);
    for (int i = 0; i < n; ++i) {
      const int c = counts[static_cast<std::size_t>(i)];
      x(i) = c == 1 ? (lo(i) + hi(i)) / 2.0 : lo(i) + (hi(i) - lo(i)) * idx[static_cast<std::size_t>(i)] / (c - 1.0);
    }
    json row = {{"x", entries(x)}};
    try {
      const Vector u = apply_mapping(map, x);
      const JacobianReport jr = jacobian(map, x);
      row["u"] = entries(u);
      row["jacobian"] = jr.det;
      if (map.is<TwoDFamily>()) {
        const double res = std::max(std::abs(jr.J(0, 0) - sigma * jr.J(1, 1)), std::abs(jr.J(0, 1) - sigma * jr.J(1, 0)));
        row["system_residual"] = res;
        max_system = std::max(max_system, res);
      }
      if (T) row["weight"] = T->weight.value(x);
    } catch (const Error&) {
      row["u"] = nullptr;
      ++singular;
    }
    pts.push_back(std::move(row));
    for (int i = n - 1; i >= 0; --i) {
      if (++idx[static_cast<std::size_t>(i)] < counts[static_cast<std::size_t>(i)]) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  r.details["mapping"] = map.describe();
  r.details["points"] = std::move(pts);
  r.details["summary"] = {{"points", total}, {"singular", singular}, {"max_system_residual", max_system},
                          {"weight", T.has_value()}};
  if (map.is<TwoDFamily>()) {
    r.checks.push_back({"system residual", max_system <= 1e-8, max_system, 1e-8,
                        "max |du1/dx1 -+ du2/dx2|, |du1/dx2 -+ du2/dx1| over regular grid points"});
  }
  return r;
}

Report run_command(Command c, const ProblemConfig& cfg) {
  switch (c) {
    case Command::Diagonalize: return cmd_diagonalize(cfg);
    case Command::Classify: return cmd_classify(cfg);
    case Command::Certify: return cmd_certify(cfg);
    case Command::FamilyEval: return cmd_family_eval(cfg);
  }
  throw Error(ErrorCode::ConfigError, "unknown command");
}

}  // namespace lpiso
