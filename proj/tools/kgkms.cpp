// kgkms: validate k-graph presentations, reproduce the spectral / measure /
// KMS-state identities on them, and generate the bundled example graphs.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kgkms/exhaustive.hpp"
#include "kgkms/graph_io.hpp"
#include "kgkms/measures.hpp"
#include "kgkms/report.hpp"
#include "kgkms/states.hpp"

namespace {

using namespace kgkms;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

int degree_cap_default() {
  if (const char* env = std::getenv("KGKMS_DEGREE_CAP")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 4;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= csv.size()) {
    size_t next = csv.find(',', pos);
    if (next == std::string::npos) next = csv.size();
    out.push_back(std::stod(csv.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

std::vector<int> parse_ints(const std::string& csv) {
  std::vector<int> out;
  for (double v : parse_doubles(csv)) out.push_back(static_cast<int>(v));
  return out;
}

int run_validate(const std::string& file) {
  GraphSpec spec;
  try {
    spec = read_graph_spec_file(file);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  std::vector<ValidationIssue> issues = check(spec.skeleton, spec.rules);
  if (issues.empty()) {
    std::cout << "ok: " << file << " presents a k-graph (rank " << spec.skeleton.rank << ", "
              << spec.skeleton.vertices.size() << " vertices, " << spec.skeleton.edges.size()
              << " edges)\n";
    return kExitPass;
  }
  for (const ValidationIssue& i : issues)
    std::cout << "[fail] " << errc_name(i.code) << ": " << i.detail << "\n";
  return kExitFail;
}

struct ReportOptions {
  std::string file;
  std::optional<std::string> r_csv;
  double beta = 1.0;
  std::optional<std::string> k_csv;
  int degree_cap = degree_cap_default();
  double tol = 1e-9;
  bool exact = false;
  unsigned seed = 12345;
  std::optional<std::string> jsonl;
  std::optional<std::string> measure_table;
};

std::string path_id(const KGraph& g, const Path& p) {
  if (p.is_vertex()) return g.vertex_id(p.range());
  std::string s;
  for (EdgeIx e : p.word()) {
    if (!s.empty()) s += ".";
    s += g.edge(e).id;
  }
  return s;
}

std::vector<Path> paths_up_to(const KGraph& g, const Degree& cap) {
  std::vector<Path> all;
  for_each_degree_leq(cap, [&](const Degree& n) {
    for (const Path& p : g.paths(n)) all.push_back(p);
  });
  return all;
}

Degree sweep_cap(const KGraph& g, int per_color) {
  Degree d(g.rank());
  for (int c = 1; c <= g.rank(); ++c)
    d.set_color(c, std::min(per_color, g.degree_cap().at_color(c)));
  return d;
}

void report_critical(const KGraph& g, const VertexMatrices& m, const SpectralData& s,
                     const Dynamics& dyn, const ReportOptions& opt, Report& rep) {
  if (dyn.J.empty()) {
    rep.skip("measures", "J is empty (preferred dynamics); semi-infinite measures out of scope",
             "nu^m needs a nontrivial partition J | K");
    rep.skip("kms-state-table", "see measures", "");
    return;
  }

  MeasureContext ctx(g, m, s, dyn);
  rep.pass("partition-constant", "C_J = " + format_double(ctx.c_j()),
           "", "C_J = prod_J (1 - e^{-r_j} rho_j)");
  if (opt.exact && !ctx.exact()) {
    rep.fail("exact-mode", "rational-exact arithmetic unavailable for this graph", "",
             "needs integral spectral radii and a rational eigenvector");
    return;
  }

  CriticalState st = make_critical_state(g, s, dyn);
  Degree cap2 = sweep_cap(g, 2);
  std::vector<Path> sweep = paths_up_to(g, cap2);

  // State table on the diagonal.
  for (const Path& p : sweep) {
    if (p.degree().total() > 1) continue;  // keep the printed table small
    double v = phi_critical(st, ToeplitzElement::term(p, p)).real();
    std::string label = p.is_vertex() ? g.vertex_id(p.range()) : g.edge(p.word()[0]).id;
    rep.pass("state[" + label + "]", format_double(v), "",
             "phi(t_mu t_mu^*) = e^{-r.d(mu)} kappa_{s(mu)}");
  }

  // Cuntz-Krieger defects.
  bool ck_ok = true;
  double worst = 0.0;
  for (VertexIx v = 0; v < g.vertex_count(); ++v)
    for (int c = 1; c <= g.rank(); ++c) {
      CkDefect d = ck_defect(ctx, v, c);
      if (d.in_k) {
        ck_ok = ck_ok && std::abs(d.value) <= 1e-12;
        worst = std::max(worst, std::abs(d.value));
      } else {
        ck_ok = ck_ok && std::abs(d.value - d.closed_form) <= 1e-12 &&
                d.value >= ctx.c_j() * ctx.kappa(v) - 1e-12;
      }
    }
  rep.check(ck_ok, "ck-defect", "max |defect on K| = " + format_double(worst), "1e-12",
            "phi kills t_v - sum_{e in v Lambda^{e_i}} t_e t_e^* exactly for i in K");

  // Measure checks.
  Degree zero(g.rank());
  double cons_worst = 0.0;
  int kdepth = opt.degree_cap;
  for (int c : dyn.K) kdepth = std::min(kdepth, g.degree_cap().at_color(c));
  kdepth = std::min(kdepth, 2);
  Degree kstep(g.rank());
  for (int c : dyn.K) kstep.set_color(c, 1);
  for (int d = 1; d <= kdepth; ++d) {
    Degree deep(g.rank());
    for (int c : dyn.K) deep.set_color(c, d);
    cons_worst = std::max(cons_worst,
                          consistency_check(ctx, zero, zero, deep).max_abs_discrepancy);
  }
  rep.check(cons_worst <= 1e-12, "measure-consistency", format_double(cons_worst), "1e-12",
            "int f o r_{n,p} dnu^{m,p} = int f dnu^{m,n}");

  // Level sums stay inside their geometric brackets.
  bool ls_ok = true;
  double ls_tail = 0.0;
  for (VertexIx v = 0; v < g.vertex_count(); ++v) {
    LevelSumResult ls = level_sum(ctx, g.vertex_path(v), 30);
    double gap = ls.closed - ls.partial;
    ls_ok = ls_ok && gap >= -1e-12 && gap <= ls.tail_bound + 1e-12;
    ls_tail = std::max(ls_tail, ls.tail_bound);
  }
  rep.check(ls_ok, "level-sum", "brackets hold at l_max = 30", "tail + 1e-12",
            "sum_{l >= m} nu^l(Z(lambda)) = e^{-r.d(lambda)} kappa_{s(lambda)}", ls_tail);

  // Subinvariance of kappa for every color: equality on K, strict slack on J.
  bool sub_ok = true;
  for (int c = 1; c <= g.rank(); ++c) {
    double scale = std::exp(dyn.r[static_cast<size_t>(c - 1)]);
    SubinvarianceResult sr = subinvariance_check(m.color(c), s.kappa, scale, opt.tol);
    bool in_k = std::find(dyn.K.begin(), dyn.K.end(), c) != dyn.K.end();
    sub_ok = sub_ok && sr.subinvariant && sr.eps_positive && sr.t_dominates_rho &&
             (in_k ? sr.equality : !sr.equality);
  }
  rep.check(sub_ok, "subinvariance", "A_i kappa <= e^{r_i} kappa for every color", "",
            "subinvariant vectors are positive with t >= rho(A)");

  double musum = 0.0;
  for (VertexIx v = 0; v < g.vertex_count(); ++v) musum += mu_cylinder(ctx, g.vertex_path(v));
  rep.check(std::abs(musum - 1.0) <= 1e-12, "mu-normalization", format_double(musum), "1e-12",
            "sum_v mu(Z(v)) = sum_v kappa_v = 1");

  DiscrepancyReport qi = quasi_invariance_check(ctx, sweep_cap(g, 2));
  rep.check(qi.max_abs_discrepancy <= 1e-12, "quasi-invariance",
            format_double(qi.max_abs_discrepancy), "1e-12",
            "mu(Z(lambda)) = e^{-r.d(lambda)} mu(Z(s(lambda)))");

  SupportEigenReport se = support_eigen_check(ctx, opt.tol);
  rep.check(se.pass, "support-eigen", "K residual " + format_double(se.max_k_residual),
            format_double(opt.tol), "A_l kappa = e^{r_l} kappa on K, strict < on J");

  // KMS residual sweep.
  double max_res = 0.0;
  for (const Path& mu : sweep)
    for (const Path& nu : sweep) {
      if (mu.source() != nu.source()) continue;
      max_res = std::max(max_res, kms_residual(g, st, SpanningTerm{mu, nu},
                                               SpanningTerm{nu, mu}, 1.0));
    }
  rep.check(max_res <= opt.tol, "kms-residual", format_double(max_res), format_double(opt.tol),
            "phi(ab) = phi(b alpha_{i beta}(a))");

  // Spatial route against the algebraic values.
  double max_gap = 0.0;
  double max_tail = 0.0;
  bool spatial_ok = true;
  for (const Path& p : sweep) {
    ToeplitzElement e = ToeplitzElement::term(p, p);
    SpatialValue sv = phi_spatial(ctx, e, 40);
    double gap = std::abs(sv.value - phi_critical(st, e));
    spatial_ok = spatial_ok && gap <= sv.tail_bound + opt.tol;
    max_gap = std::max(max_gap, gap);
    max_tail = std::max(max_tail, sv.tail_bound);
  }
  rep.check(spatial_ok, "spatial-vs-algebraic", "max gap " + format_double(max_gap),
            "tail + " + format_double(opt.tol),
            "phi(a) = sum_m int (pi(Phi^gamma(a)) xi | xi) dnu^m", max_tail);

  // Finite exhaustive sets and the relative identity.
  bool exh_ok = true;
  bool resid_ok = true;
  for (VertexIx v = 0; v < g.vertex_count(); ++v)
    for (int c = 1; c <= g.rank(); ++c) {
      std::vector<Path> edges;
      for (EdgeIx e : g.out_edges(v, c)) edges.push_back(g.edge_path(e));
      exh_ok = exh_ok && is_finite_exhaustive(g, make_candidate(g, v, edges));
      resid_ok = resid_ok && relative_ck_identity(g, v, c).is_zero();
    }
  rep.check(exh_ok, "finite-exhaustive", "every v Lambda^{e_i}", "",
            "each v Lambda^{e_i} is finite exhaustive");
  rep.check(resid_ok, "relative-ck-identity", resid_ok ? "residual = 0" : "nonzero residual", "",
            "prod_e (t_v - t_e t_e^*) = t_v - sum_e t_e t_e^*");

  if (opt.exact && ctx.exact()) {
    bool exact_ok = true;
    for (const Path& mu : sweep) {
      for (const Path& nu : sweep) {
        if (mu.source() != nu.source()) continue;
        if (!kms_residual_exact(ctx, SpanningTerm{mu, nu}, SpanningTerm{nu, mu}).is_zero())
          exact_ok = false;
      }
    }
    rep.check(exact_ok, "kms-residual-exact", exact_ok ? "identically zero" : "nonzero", "exact",
              "rational-exact KMS identity");
  }

  // Seeded algebra spot-checks.
  std::mt19937 rng(opt.seed);
  std::uniform_int_distribution<size_t> pick(0, sweep.size() - 1);
  double assoc_worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    ToeplitzElement a = ToeplitzElement::isometry(sweep[pick(rng)]);
    ToeplitzElement b = adjoint(ToeplitzElement::isometry(sweep[pick(rng)]));
    ToeplitzElement c = ToeplitzElement::isometry(sweep[pick(rng)]);
    assoc_worst = std::max(assoc_worst, distance(multiply(g, multiply(g, a, b), c),
                                                 multiply(g, a, multiply(g, b, c))));
  }
  rep.check(assoc_worst <= 1e-12, "algebra-associativity", format_double(assoc_worst), "1e-12",
            "(ab)c = a(bc) on sampled spanning triples");

  // Uniqueness is a condition report: rational independence of the r_i up to
  // the height bound, never a re-derivation.
  if (auto relation = find_rational_relation(dyn.r)) {
    std::string c = "(";
    for (size_t i = 0; i < relation->size(); ++i)
      c += (i ? "," : "") + std::to_string((*relation)[i]);
    c += ")";
    rep.pass("uniqueness", "integer relation c.r = 0 with c = " + c + "; no uniqueness claim",
             "", "uniqueness of the critical state needs rationally independent r");
  } else {
    rep.pass("uniqueness", "no integer relation up to height 1e6: the critical state is unique",
             "", "uniqueness of the critical state needs rationally independent r");
  }

  // Measure table export: one line per path up to the sweep cap.
  if (opt.measure_table) {
    std::ofstream out(*opt.measure_table);
    out << "# path m nu^m(Z(path)) mu(Z(path))\n";
    for (const Path& p : sweep) {
      Degree mdeg = p.degree().restricted_to(dyn.J);
      out << path_id(g, p) << " " << mdeg.to_string() << " "
          << format_double(nu_cylinder(ctx, mdeg, p)) << " "
          << format_double(mu_cylinder(ctx, p)) << "\n";
    }
    rep.pass("measure-table", "wrote " + *opt.measure_table, "", "nu^{m,n} and mu on cylinders");
  }
}

void report_supercritical(const KGraph& g, const VertexMatrices& m, const SpectralData& s,
                          const Dynamics& dyn, const ReportOptions& opt, Report& rep) {
  YSeries ys = y_vector(m, s, dyn.r, opt.beta, 60);
  std::string yv;
  for (size_t v = 0; v < ys.y.size(); ++v) {
    if (v) yv += ", ";
    yv += format_double(ys.y[v]);
  }
  rep.pass("y-vector", yv, "", "y_v = sum_n e^{-beta r.n} |Lambda^n v|", ys.tail_bound.front());

  SupercriticalState st = make_supercritical_state(g, m, s, dyn, opt.beta, sweep_cap(g, 4));
  TailValue one = phi_supercritical(st, ToeplitzElement::one(g));
  rep.check(std::abs(one.value.real() - 1.0) <= one.tail_bound + opt.tol, "phi-eps-normalization",
            format_double(one.value.real()), "tail + " + format_double(opt.tol),
            "phi_eps(1) = 1", one.tail_bound);

  // Closed diagonal values: phi_eps(t_mu t_mu^*) = e^{-beta r.d(mu)} w_{s(mu)}
  // with w = sum_n e^{-beta r.n} A^n eps.
  std::vector<double> w(static_cast<size_t>(g.vertex_count()), 0.0);
  {
    int k = m.rank();
    auto rec = [&](auto&& self, int color, const IntMat& acc, double weight) -> void {
      if (color > k) {
        for (int v = 0; v < g.vertex_count(); ++v)
          for (int u = 0; u < g.vertex_count(); ++u)
            w[static_cast<size_t>(v)] +=
                weight * static_cast<double>(acc.at(v, u)) * st.eps[static_cast<size_t>(u)];
        return;
      }
      IntMat cur = acc;
      double wc = weight;
      double step = std::exp(-opt.beta * dyn.r[static_cast<size_t>(color - 1)]);
      for (int t = 0; t <= 60; ++t) {
        if (t > 0) {
          cur = cur * m.color(color);
          wc *= step;
        }
        self(self, color + 1, cur, wc);
      }
    };
    rec(rec, 1, IntMat::identity(g.vertex_count()), 1.0);
  }

  double max_gap = 0.0;
  bool ok = true;
  Degree cap1 = sweep_cap(g, 1);
  for (const Path& p : paths_up_to(g, cap1)) {
    TailValue tv = phi_supercritical(st, ToeplitzElement::term(p, p));
    double closed =
        std::exp(-opt.beta * dyn.dot(p.degree())) * w[static_cast<size_t>(p.source())];
    double gap = std::abs(tv.value.real() - closed);
    ok = ok && gap <= tv.tail_bound + opt.tol;
    max_gap = std::max(max_gap, gap);
  }
  rep.check(ok, "phi-eps-diagonal", "max gap " + format_double(max_gap), "tail + tol",
            "phi_eps(t_mu t_mu^*) = e^{-beta r.d(mu)} (series at s(mu))");
}

int run_report(const ReportOptions& opt) {
  Report rep;
  GraphSpec spec;
  try {
    spec = read_graph_spec_file(opt.file);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    KGraph g = KGraph::validate(spec.skeleton, spec.rules, KGraphOptions{opt.degree_cap});
    rep.pass("validate", "k-graph with " + std::to_string(g.vertex_count()) + " vertices, " +
                             std::to_string(g.edge_count()) + " edges",
             "", "factorization axioms");

    VertexMatrices m = vertex_matrices(g);
    rep.pass("commutation", "A_i A_j = A_j A_i (exact)", "", "vertex matrices commute");

    SpectralData s = common_pf(g, m);
    std::string rho;
    for (int c = 1; c <= g.rank(); ++c) {
      if (c > 1) rho += ", ";
      rho += format_double(s.rho[static_cast<size_t>(c - 1)]);
    }
    rep.pass("perron", "rho = (" + rho + ")", "1e-9 residual",
             "A_i kappa = rho_i kappa, common unimodular eigenvector");

    std::vector<double> r;
    if (opt.r_csv) {
      r = parse_doubles(*opt.r_csv);
      if (r.size() != static_cast<size_t>(g.rank()))
        fail(Errc::bad_params, "--r needs one entry per color");
    } else {
      for (int c = 1; c <= g.rank(); ++c)
        r.push_back(std::log(s.rho[static_cast<size_t>(c - 1)]));
    }

    double bc = critical_beta(s, r);
    rep.pass("critical-beta", format_double(bc), "", "beta_c = max_i ln rho(A_i) / r_i");

    GateResult gate = existence_gate(m, s, r, opt.beta, opt.tol);
    std::string verdict = gate.verdict == GateVerdict::no_kms ? "NoKMS"
                          : gate.verdict == GateVerdict::supercritical
                              ? "Supercritical"
                              : "Critical";
    if (gate.verdict == GateVerdict::critical) {
      verdict += "({";
      for (size_t i = 0; i < gate.K.size(); ++i)
        verdict += (i ? "," : "") + std::to_string(gate.K[i]);
      verdict += "})";
    }
    rep.pass("existence-gate", verdict + " at beta = " + format_double(opt.beta), "",
             "KMS_beta states need beta r_i >= ln rho(A_i)");

    if (gate.verdict == GateVerdict::no_kms) {
      rep.skip("kms-checks", "no KMS states at this inverse temperature", "");
    } else {
      std::optional<std::vector<int>> declared;
      if (opt.k_csv) declared = parse_ints(*opt.k_csv);
      Dynamics dyn = normalize_dynamics(s, r, declared);
      std::string parts = "r' = (";
      for (int c = 1; c <= g.rank(); ++c)
        parts += (c > 1 ? ", " : "") + format_double(dyn.r[static_cast<size_t>(c - 1)]);
      parts += "), K = {";
      for (size_t i = 0; i < dyn.K.size(); ++i) parts += (i ? "," : "") + std::to_string(dyn.K[i]);
      parts += "}";
      rep.pass("normalize-dynamics", parts, "", "rescale so beta_c = 1");

      if (gate.verdict == GateVerdict::supercritical)
        report_supercritical(g, m, s, dyn, opt, rep);
      else
        report_critical(g, m, s, dyn, opt, rep);
    }
  } catch (const ValidationError& e) {
    for (const ValidationIssue& i : e.issues())
      rep.fail(std::string(errc_name(i.code)), i.detail, "", "k-graph axioms");
  } catch (const Error& e) {
    rep.fail(std::string(errc_name(e.code())), e.what(), "", "");
  }

  std::cout << render_human(rep);
  if (opt.jsonl) {
    std::ofstream out(*opt.jsonl);
    if (!out) {
      std::cerr << "cannot write " << *opt.jsonl << "\n";
      return kExitUsage;
    }
    out << render_jsonl(rep);
  }
  return rep.all_pass() ? kExitPass : kExitFail;
}

int run_example(const std::string& name, const std::string& out_file, const std::string& counts,
                int colors, int length, const std::string& flip) {
  try {
    GraphSpec spec;
    if (name == "single-vertex") {
      std::vector<int> n = parse_ints(counts);
      if (flip.empty()) {
        spec = make_single_vertex(n);
      } else {
        std::vector<int> f = parse_ints(flip);
        if (f.size() != 2) fail(Errc::bad_params, "--flip needs i,j");
        spec = make_single_vertex_flip(n, f[0], f[1]);
      }
    } else if (name == "product-of-cycles") {
      spec = make_product_of_cycles(colors, length);
    } else {
      fail(Errc::bad_params, "unknown example '" + name +
                                 "' (choose single-vertex or product-of-cycles)");
    }
    write_graph_spec_file(spec, out_file);
    std::cout << "wrote " << out_file << "\n";
    return kExitPass;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite k-graph combinatorics, Perron-Frobenius data, cylinder measures and KMS "
               "state verification"};
  app.require_subcommand(1);

  std::string file;
  CLI::App* validate = app.add_subcommand("validate", "check a graph spec file");
  validate->add_option("file", file, "graph spec (JSON)")->required();

  ReportOptions ropt;
  CLI::App* report = app.add_subcommand("report", "run the verification battery");
  report->add_option("file", ropt.file, "graph spec (JSON)")->required();
  std::string r_csv, k_csv, jsonl;
  report->add_option("--r", r_csv, "dynamics vector, comma separated (default: preferred)");
  report->add_option("--beta", ropt.beta, "inverse temperature (default 1)");
  report->add_option("--K", k_csv, "declared critical color set, comma separated");
  report->add_option("--degree-cap", ropt.degree_cap,
                     "per-color degree cap (default 4, env KGKMS_DEGREE_CAP)");
  report->add_option("--tol", ropt.tol, "verification tolerance (default 1e-9)");
  report->add_flag("--exact", ropt.exact, "require rational-exact mode");
  report->add_option("--seed", ropt.seed, "seed for sampled algebra checks");
  report->add_option("--jsonl", jsonl, "write the machine-readable report here");
  std::string table;
  report->add_option("--measure-table", table, "export nu/mu cylinder values to this file");

  std::string name, out_file = "example.kg", counts = "2,3", flip;
  int colors = 2, length = 3;
  CLI::App* example = app.add_subcommand("example", "write a bundled example graph");
  example->add_option("name", name, "single-vertex | product-of-cycles")->required();
  example->add_option("-o,--out", out_file, "output file (default example.kg)");
  example->add_option("--counts", counts, "single-vertex: loops per color (default 2,3)");
  example->add_option("--flip", flip, "single-vertex: color pair i,j for index-flip squares");
  example->add_option("--colors", colors, "product-of-cycles: number of colors (default 2)");
  example->add_option("--length", length, "product-of-cycles: cycle length (default 3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return run_validate(file);
    if (report->parsed()) {
      if (!r_csv.empty()) ropt.r_csv = r_csv;
      if (!k_csv.empty()) ropt.k_csv = k_csv;
      if (!jsonl.empty()) ropt.jsonl = jsonl;
      if (!table.empty()) ropt.measure_table = table;
      return run_report(ropt);
    }
    if (example->parsed()) return run_example(name, out_file, counts, colors, length, flip);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
