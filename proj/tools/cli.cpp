#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "eulerlab/chain.hpp"
#include "eulerlab/corpus.hpp"
#include "eulerlab/explore.hpp"
#include "eulerlab/graph.hpp"
#include "eulerlab/graph_io.hpp"
#include "eulerlab/hitting.hpp"
#include "eulerlab/mixing.hpp"
#include "eulerlab/parallel.hpp"
#include "eulerlab/random.hpp"
#include "eulerlab/sensitivity.hpp"
#include "eulerlab/spectral.hpp"

namespace eulerlab::cli {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

template <class T>
T parse_number(const std::string& s, const std::string& what) {
  std::istringstream in(s);
  T value{};
  if (!(in >> value) || !in.eof()) throw UsageError("malformed " + what + ": '" + s + "'");
  return value;
}

double parse_alpha(const std::string& s) {
  if (s == "golden") return static_cast<double>(golden_conjugate());
  return parse_number<double>(s, "alpha");
}

long double parse_xi(const std::string& s) {
  if (s == "golden") return golden_conjugate();
  return parse_number<long double>(s, "xi");
}

struct Loaded {
  std::string name;
  EulerianMultigraph graph;
  std::vector<double> holding;
};

// Generator specs:
//   cycle:N  biased:N[:F:B]  circulant:N:S1,S2,..  gadget:N[:ALPHA]
//   random:N:M  random-simple:N:M  regular:N:D
Loaded generate(const std::string& spec, std::uint64_t seed) {
  auto parts = split(spec, ':');
  if (parts.size() < 2) throw UsageError("malformed generator spec '" + spec + "'");
  const std::string& kind = parts[0];
  const auto n = parse_number<std::size_t>(parts[1], "generator size");
  auto arg = [&](std::size_t i) -> const std::string& {
    if (i >= parts.size()) throw UsageError("generator spec '" + spec + "' is missing a field");
    return parts[i];
  };
  auto expect_fields = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() < lo || parts.size() > hi) throw UsageError("malformed generator spec '" + spec + "'");
  };
  Loaded l;
  l.name = spec;
  if (kind == "cycle") {
    expect_fields(2, 2);
    l.graph = gen_directed_cycle(n);
  } else if (kind == "biased") {
    expect_fields(2, 4);
    std::uint32_t f = 2, b = 1;
    if (parts.size() > 2) {
      f = parse_number<std::uint32_t>(arg(2), "forward multiplicity");
      b = parse_number<std::uint32_t>(arg(3), "backward multiplicity");
    }
    l.graph = gen_biased_cycle(n, f, b);
  } else if (kind == "circulant") {
    expect_fields(3, 3);
    std::vector<std::size_t> steps;
    for (const auto& s : split(arg(2), ',')) steps.push_back(parse_number<std::size_t>(s, "circulant step"));
    l.graph = gen_circulant(n, steps);
  } else if (kind == "gadget") {
    expect_fields(2, 3);
    Gadget g = gen_two_cycle_gadget({n, parts.size() > 2 ? parse_alpha(arg(2)) : 0.5});
    l.graph = std::move(g.graph);
    l.holding = std::move(g.holding);
  } else if (kind == "random" || kind == "random-simple") {
    expect_fields(3, 3);
    l.graph = gen_random_eulerian(n, parse_number<std::uint64_t>(arg(2), "edge count"), seed, kind == "random-simple");
  } else if (kind == "regular") {
    expect_fields(3, 3);
    l.graph = gen_random_regular(n, parse_number<std::uint32_t>(arg(2), "degree"), seed);
  } else {
    throw UsageError("unknown generator '" + kind + "'");
  }
  return l;
}

Loaded load(const ExperimentConfig& cfg) {
  Loaded l;
  if (!cfg.graph_file.empty()) {
    GraphFile f = read_graph_file(cfg.graph_file);
    l.name = cfg.graph_file;
    l.graph = std::move(f.graph);
    l.holding = std::move(f.holding);
  } else if (!cfg.gen_spec.empty()) {
    l = generate(cfg.gen_spec, cfg.seed);
  } else {
    throw UsageError(cfg.subcommand + " needs --graph FILE or --gen SPEC");
  }
  if (cfg.holding) l.holding.assign(l.graph.vertex_count(), *cfg.holding);
  if (l.holding.empty()) l.holding.assign(l.graph.vertex_count(), 0.5);
  return l;
}

LazyChain chain_of(const ExperimentConfig& cfg, const Loaded& l) {
  LazyChain c = LazyChain::build(l.graph, l.holding);
  if (!cfg.dump_kernel.empty()) {
    std::ofstream f(cfg.dump_kernel);
    if (!f) throw InputError("cannot write " + cfg.dump_kernel);
    c.dump_csv(f);
  }
  return c;
}

json opt(const std::optional<std::uint64_t>& v) { return v ? json(*v) : json(nullptr); }

std::string set_text(const VertexSet& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + std::to_string(s[i]);
  return out;
}

// ---- subcommands -----------------------------------------------------------

void run_validate(const ExperimentConfig& cfg, ExperimentReport& rep) {
  Loaded l = load(cfg);
  ValidationReport v = validate(l.graph);
  Table t{"validate", {"graph", "n", "m", "eulerian", "strongly_connected", "simple", "regular_degree", "min_out_degree"}, {}};
  t.rows.push_back({l.name, l.graph.vertex_count(), l.graph.edge_count(), v.eulerian, v.connected, l.graph.is_simple(),
                    v.regular_degree ? json(*v.regular_degree) : json(nullptr), l.graph.min_out_degree()});
  rep.tables.push_back(std::move(t));
  Verdict verdict{l.name, "eulerian and strongly connected", 1, (v.eulerian && v.connected) ? 0u : 1u, ""};
  if (verdict.violations) verdict.example = !v.eulerian ? "in-degree differs from out-degree" : "not strongly connected";
  rep.verdicts.push_back(verdict);
}

void run_gen(const ExperimentConfig& cfg, ExperimentReport& rep) {
  if (cfg.gen_spec.empty()) throw UsageError("gen needs --gen SPEC");
  Loaded l = generate(cfg.gen_spec, cfg.seed);
  if (cfg.holding) l.holding.assign(l.graph.vertex_count(), *cfg.holding);
  rep.text = to_text(l.graph, l.holding);
}

void run_mix(const ExperimentConfig& cfg, ExperimentReport& rep) {
  Loaded l = load(cfg);
  LazyChain c = chain_of(cfg, l);
  if (!cfg.times.empty()) {
    DistanceProfile p = distance_profile(c, cfg.times);
    Table t{"profile", {"t", "d1", "dinf"}, {}};
    for (std::size_t i = 0; i < p.times.size(); ++i) t.rows.push_back({p.times[i], p.d1[i], p.dinf[i]});
    rep.tables.push_back(std::move(t));
    return;
  }
  KernelPowers kp(c);
  Table t{"thresholds", {"metric", "epsilon", "time", "cap", "value_at_time"}, {}};
  for (const char* m : {"tv", "linf"}) {
    if (cfg.metric != "both" && cfg.metric != m) continue;
    auto r = threshold_time(kp, std::string(m) == "tv" ? Metric::tv : Metric::linf, cfg.eps);
    t.rows.push_back({m, cfg.eps, opt(r.time), r.cap, r.value_at_time});
  }
  rep.tables.push_back(std::move(t));
}

void run_spectral(const ExperimentConfig& cfg, ExperimentReport& rep) {
  Loaded l = load(cfg);
  LazyChain c = chain_of(cfg, l);
  if (!cfg.profile && cfg.gmt_a.empty()) throw UsageError("spectral needs --profile and/or --gmt-a");
  SpectralProfile prof = spectral_profile(c, cfg.exact_profile ? ProfileMode::exact : ProfileMode::connected_only);
  if (cfg.profile) {
    Table t{"profile", {"r", "lambda", "witness"}, {}};
    for (const auto& b : prof.breakpoints) t.rows.push_back({b.r, b.value, set_text(b.witness)});
    rep.tables.push_back(std::move(t));
  }
  if (!cfg.gmt_a.empty()) {
    Table t{"gmt", {"a", "bound_steps", "integral", "t_unif"}, {}};
    KernelPowers kp(c);
    for (double a : cfg.gmt_a) {
      GmtBound b = gmt_bound(c, prof, a);
      auto tu = threshold_time(kp, Metric::linf, a);
      t.rows.push_back({a, b.bound_steps, b.integral, opt(tu.time)});
      rep.verdicts.push_back({l.name, "gmt_bound >= t_unif(" + std::to_string(a) + ")", 1,
                              (tu.time && *tu.time <= b.bound_steps) ? 0u : 1u, ""});
    }
    rep.tables.push_back(std::move(t));
  }
}

void run_hit(const ExperimentConfig& cfg, ExperimentReport& rep) {
  Loaded l = load(cfg);
  LazyChain c = chain_of(cfg, l);
  const int modes = cfg.matrix + cfg.cover + !cfg.collide.empty();
  if (modes != 1) throw UsageError("hit needs exactly one of --matrix, --cover, --collide");
  if (cfg.start >= c.size()) throw UsageError("--start is not a vertex");
  if (cfg.matrix) {
    Eigen::MatrixXd h = hitting_times(c);
    Table t{"hitting", {"u", "v", "hitting_time"}, {}};
    for (Eigen::Index u = 0; u < h.rows(); ++u) {
      for (Eigen::Index v = 0; v < h.cols(); ++v) t.rows.push_back({u, v, h(u, v)});
    }
    rep.tables.push_back(std::move(t));
  } else if (cfg.cover) {
    McEstimate e = cover_time(c, cfg.start, cfg.replicas, cfg.seed, cfg.workers);
    rep.tables.push_back({"cover", {"start", "mean", "stderr", "replicas", "seed"},
                          {{cfg.start, e.mean, e.stderr_, e.replicas, e.seed}}});
  } else {
    std::string spec = cfg.collide;
    if (spec.rfind("traj=", 0) == 0) spec = spec.substr(5);
    std::optional<Trajectory> traj;
    if (spec == "SWEEP") {
      traj = Trajectory::antipodal_sweep(l.graph, cfg.start);
    } else if (spec.rfind("STATIC:", 0) == 0) {
      const auto v = parse_number<std::uint32_t>(spec.substr(7), "static target");
      if (v >= c.size()) throw UsageError("static target is not a vertex");
      traj = Trajectory::fixed(v);
    } else {
      throw UsageError("--collide expects traj=STATIC:v or traj=SWEEP");
    }
    CollisionEstimate e = moving_target_collision(c, cfg.start, *traj, cfg.replicas, cfg.horizon, cfg.seed, 0, cfg.workers);
    rep.tables.push_back({"collision",
                          {"start", "trajectory", "mean", "stderr", "replicas", "horizon", "truncated_fraction", "flagged"},
                          {{cfg.start, traj->name(), e.mean, e.stderr_, e.replicas, e.horizon, e.truncated_fraction, e.flagged}}});
  }
}

void run_explore(const ExperimentConfig& cfg, ExperimentReport& rep) {
  Loaded l = load(cfg);
  LazyChain c = chain_of(cfg, l);
  if (cfg.start >= c.size()) throw UsageError("--start is not a vertex");
  std::vector<std::size_t> ks = cfg.k;
  if (ks.empty()) {
    for (std::size_t k = 1; k < c.size(); k *= 2) ks.push_back(k);
    ks.push_back(c.size());
  }
  for (std::size_t k : ks) {
    if (k == 0 || k > c.size()) throw UsageError("--k values must lie in [1, n]");
  }
  CycleLabelling lab = ham_labelling(undirected_view(l.graph), cfg.start);
  if (!cfg.dump_labelling.empty()) {
    std::ofstream f(cfg.dump_labelling);
    if (!f) throw InputError("cannot write " + cfg.dump_labelling);
    for (VertexId v : lab.order) f << v << '\n';
  }
  Table t{"exploration", {"k", "mean", "stderr", "mean_phases", "max_phases"}, {}};
  Verdict phases{l.name, "phases <= 2k and |B| <= |Y|", 0, 0, ""};
  try {
    ExplorationRecord r = run_phases(c, lab, cfg.start, ks, cfg.replicas, cfg.seed, cfg.workers);
    for (const auto& p : r.points) t.rows.push_back({p.k, p.mean, p.stderr_, p.mean_phases, p.max_phases});
    phases.checked = r.phase_checks;
  } catch (const AuditViolation& e) {
    phases.violations = 1;
    phases.example = e.what();
  }
  rep.tables.push_back(std::move(t));
  rep.verdicts.push_back(phases);
}

void run_gadget(const ExperimentConfig& cfg, ExperimentReport& rep) {
  std::vector<std::size_t> ns = cfg.n_grid.empty() ? std::vector<std::size_t>{32, 64, 128} : cfg.n_grid;
  std::vector<double> alphas;
  for (const auto& a : cfg.alphas.empty() ? std::vector<std::string>{"golden", "0.5"} : cfg.alphas) {
    alphas.push_back(parse_alpha(a));
  }
  if (!cfg.return_times.empty()) {
    Table t{"return_probability", {"n", "alpha", "t", "p", "n_times_p"}, {}};
    for (std::size_t n : ns) {
      for (double a : alphas) {
        auto prof = return_probability_profile({n, a}, cfg.return_times, cfg.mc ? ProfileSource::mc : ProfileSource::exact,
                                               cfg.replicas, cfg.seed);
        for (const auto& p : prof) t.rows.push_back({n, a, p.t, p.p, static_cast<double>(n) * p.p});
      }
    }
    rep.tables.push_back(std::move(t));
    return;
  }
  if (cfg.mc) {
    // Monte Carlo commute moments on the slow cycle against the closed form.
    Table t{"commute", {"n", "alpha", "f_n", "mean_t1", "mc_mean_t1", "mc_stderr", "var_over_n"}, {}};
    for (std::size_t n : ns) {
      for (double a : alphas) {
        LazyChain cyc = single_cycle_chain({n, a}, true);
        Rng rng(derive_stream_seed(cfg.seed, n));
        double s = 0.0, s2 = 0.0;
        for (std::uint64_t i = 0; i < cfg.replicas; ++i) {
          const double x = static_cast<double>(sample_commute(cyc, n, rng));
          s += x;
          s2 += x * x;
        }
        const double r = static_cast<double>(cfg.replicas);
        const double mean = s / r, var = s2 / r - mean * mean;
        GadgetMoments m = gadget_moments(n, a);
        t.rows.push_back({n, a, m.f_n, m.mean_t1, mean, std::sqrt(var / r), var / static_cast<double>(n)});
      }
    }
    rep.tables.push_back(std::move(t));
    return;
  }
  SensitivityReport s = sensitivity_experiment(ns, alphas, cfg.eps, cfg.workers);
  Table t{"sensitivity", {"n", "alpha", "t_mix", "t_unif", "fitted_exponent"}, {}};
  for (const auto& row : s.rows) {
    const auto ai = static_cast<std::size_t>(std::find(s.alphas.begin(), s.alphas.end(), row.alpha) - s.alphas.begin());
    const double e = s.exponent_t_mix[ai];
    t.rows.push_back({row.n, row.alpha, opt(row.t_mix), opt(row.t_unif), std::isnan(e) ? json(nullptr) : json(e)});
  }
  rep.tables.push_back(std::move(t));
}

void run_dioph(const ExperimentConfig& cfg, ExperimentReport& rep) {
  const long double xi = parse_xi(cfg.xi);
  std::vector<std::size_t> ns = cfg.n_grid.empty() ? std::vector<std::size_t>{10000} : cfg.n_grid;
  Table t{"gaps", {"n", "gap", "n_times_gap", "max_interval_count"}, {}};
  for (std::size_t n : ns) {
    GapReport g = sequence_gap(xi, n);
    t.rows.push_back({n, g.gap, g.gap * static_cast<double>(n), g.max_interval_count});
  }
  rep.tables.push_back(std::move(t));
  ContinuedFraction cf = cf_expand(xi, 20);
  Table c{"continued_fraction", {"index", "coefficient"}, {}};
  for (std::size_t i = 0; i < cf.a.size(); ++i) c.rows.push_back({i, cf.a[i]});
  rep.tables.push_back(std::move(c));
}

std::vector<Loaded> audit_corpus(const ExperimentConfig& cfg) {
  std::string dir = cfg.corpus_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("EULERLAB_CORPUS")) dir = env;
  }
  std::vector<Loaded> out;
  if (!dir.empty()) {
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& e : std::filesystem::directory_iterator(dir, ec)) {
      if (e.path().extension() == ".eul") files.push_back(e.path());
    }
    if (ec) throw InputError("cannot read corpus directory " + dir);
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
      GraphFile f = read_graph_file(p.string());
      out.push_back({p.filename().string(), std::move(f.graph), std::move(f.holding)});
      if (out.back().holding.empty()) out.back().holding.assign(out.back().graph.vertex_count(), 0.5);
    }
    if (out.empty()) throw InputError("no .eul files in " + dir);
    return out;
  }
  auto add = [&](std::vector<CorpusEntry> es) {
    for (auto& e : es) out.push_back({e.name, std::move(e.graph), std::move(e.holding)});
  };
  add(small_corpus(cfg.seed));
  add(regular_corpus({8, 16}, cfg.seed + 2));
  add(general_corpus({16}, cfg.seed + 4));
  return out;
}

void run_audit_all(const ExperimentConfig& cfg, ExperimentReport& rep) {
  Table t{"audits", {"graph", "bound", "checked", "violations", "worst_ratio", "example"}, {}};
  auto push = [&](const std::string& graph, const std::string& bound, std::uint64_t checked, std::uint64_t violations,
                  double worst, const std::string& example) {
    t.rows.push_back({graph, bound, checked, violations, worst, example});
    rep.verdicts.push_back({graph, bound, checked, violations, example});
  };
  for (const Loaded& l : audit_corpus(cfg)) {
    const auto& g = l.graph;
    const std::size_t n = g.vertex_count();
    const bool regular = validate(g).regular_degree.has_value();
    LazyChain walk = LazyChain::build(g, 0.0);

    BoundAuditOptions o;
    o.seed = cfg.seed;
    o.cover_replicas = cfg.replicas;
    o.lemma_key = g.is_simple();
    o.exit_bound = regular && g.is_simple();
    o.visit_bound = regular && n <= 64;
    for (const auto& v : bound_audit(walk, g, o)) push(l.name, v.bound, v.checked, v.violations, v.worst_ratio, v.example);

    LazyChain c = LazyChain::build(g, l.holding);
    KernelPowers kp(c);
    if (n <= 12 && c.delta() > 0.0) {
      SpectralProfile prof = spectral_profile(c);
      std::uint64_t bad = 0;
      double worst = 0.0;
      for (double a : {0.25, 0.125}) {
        auto tu = threshold_time(kp, Metric::linf, a);
        const auto b = gmt_bound(c, prof, a).bound_steps;
        if (!tu.time || *tu.time > b) ++bad;
        if (tu.time) worst = std::max(worst, static_cast<double>(*tu.time) / static_cast<double>(b));
      }
      push(l.name, "gmt_bound >= t_unif(a)", 2, bad, worst, "");
    }

    {
      Rng rng(derive_stream_seed(cfg.seed, 10));
      auto tu = threshold_time(kp, Metric::linf, 0.25);
      const std::uint64_t range = 3 * (tu.time ? *tu.time : 100) + 1;
      std::uint64_t bad = 0;
      double worst = 0.0;
      std::string example;
      for (int i = 0; i < 20; ++i) {
        const std::uint64_t s = rng.below(range), u = rng.below(range);
        auto chk = submultiplicativity_audit(kp, s, u);
        if (!chk.holds && bad++ == 0) example = "s=" + std::to_string(s) + " t=" + std::to_string(u);
        if (chk.rhs > 0.0) worst = std::max(worst, chk.lhs / chk.rhs);
      }
      push(l.name, "dinf(s+t) <= dinf(s) L1(t)", 20, bad, worst, example);
    }

    std::vector<std::size_t> ks;
    for (std::size_t k = 1; k < n; k *= 2) ks.push_back(k);
    ks.push_back(n);
    try {
      ExplorationAudit a = exploration_audit(walk, g, ks, cfg.replicas, cfg.seed, cfg.workers);
      push(l.name, a.regular ? "E T_k <= 512 k^2" : "E T_k <= 288 k^3", a.checked, a.violations, a.worst_ratio, "");
    } catch (const AuditViolation& e) {
      push(l.name, "phases <= 2k and |B| <= |Y|", 1, 1, 0.0, e.what());
    }
  }
  rep.tables.push_back(std::move(t));
}

// ---- output ----------------------------------------------------------------

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
    return buf;
  }
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

void write_table(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

}  // namespace

bool ExperimentReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.violations == 0; });
}

ExperimentConfig parse_args(int argc, const char* const* argv) {
  ExperimentConfig cfg;
  CLI::App app{"Random walks on Eulerian digraphs: mixing, hitting, exploration and audits", "eulerlab"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_version_flag("--version", "eulerlab 0.1.0");

  std::string format = "csv";
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--workers", cfg.workers, "worker threads (0: hardware)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", cfg.out, "output file (default stdout)");

  std::string csv_out;
  double holding = -1.0;
  auto graph_opts = [&](CLI::App* sub) {
    sub->add_option("--graph", cfg.graph_file, "graph file")->check(CLI::ExistingFile);
    sub->add_option("--gen", cfg.gen_spec, "generator spec, e.g. cycle:8, random:10:30, gadget:32:golden");
    sub->add_option("--holding", holding, "uniform holding probability");
    sub->add_option("--dump-kernel", cfg.dump_kernel, "write the kernel as CSV");
    sub->add_option("--csv", csv_out, "write CSV to this file");
  };

  auto* validate_cmd = app.add_subcommand("validate", "check Eulerian and connectivity conditions");
  graph_opts(validate_cmd);

  auto* gen = app.add_subcommand("gen", "write a generated graph in .eul format");
  gen->add_option("--gen,spec", cfg.gen_spec, "generator spec")->required();
  gen->add_option("--holding", holding, "uniform holding probability");

  auto* mix = app.add_subcommand("mix", "mixing and uniform-mixing thresholds, distance profiles");
  graph_opts(mix);
  mix->add_option("--metric", cfg.metric, "tv, linf or both")->check(CLI::IsMember({"tv", "linf", "both"}));
  mix->add_option("--eps", cfg.eps, "threshold in (0, 1)");
  mix->add_option("--times", cfg.times, "print d1 and dinf at these times")->delimiter(',');

  auto* spectral = app.add_subcommand("spectral", "spectral profile and the evolving-set bound");
  graph_opts(spectral);
  spectral->add_flag("--profile", cfg.profile, "print the profile breakpoints");
  spectral->add_flag("--exact", cfg.exact_profile, "enumerate disconnected sets too");
  spectral->add_option("--gmt-a", cfg.gmt_a, "bound t_unif(a) for these a")->delimiter(',');

  auto* hit = app.add_subcommand("hit", "hitting, cover and collision times");
  graph_opts(hit);
  hit->add_flag("--matrix", cfg.matrix, "all-pairs hitting times");
  hit->add_flag("--cover", cfg.cover, "Monte Carlo cover time");
  hit->add_option("--collide", cfg.collide, "traj=STATIC:v or traj=SWEEP");
  hit->add_option("--start", cfg.start, "walker start vertex");
  hit->add_option("--horizon", cfg.horizon, "collision truncation (0: 100 m n)");
  hit->add_option("--replicas", cfg.replicas);

  auto* explore = app.add_subcommand("explore", "exploration times T_k with phase audits");
  graph_opts(explore);
  explore->add_option("--k", cfg.k, "targets k")->delimiter(',');
  explore->add_option("--start", cfg.start, "walker start vertex");
  explore->add_option("--replicas", cfg.replicas);
  explore->add_option("--dump-labelling", cfg.dump_labelling, "write the cycle order, one vertex per line");

  auto* gadget = app.add_subcommand("gadget", "two-cycle gadget experiments");
  gadget->add_option("--n", cfg.n_grid, "cycle lengths")->delimiter(',');
  gadget->add_option("--alpha", cfg.alphas, "golden or a number in [0, 1)")->delimiter(',');
  gadget->add_option("--eps", cfg.eps, "threshold in (0, 1)");
  bool exact = false;
  gadget->add_flag("--exact", exact, "exact evolution (default)");
  gadget->add_flag("--mc", cfg.mc, "Monte Carlo instead");
  gadget->add_option("--return-times", cfg.return_times, "P_0(X_t = 0) at these t")->delimiter(',');
  gadget->add_option("--replicas", cfg.replicas);
  gadget->add_option("--csv", csv_out, "write CSV to this file");

  auto* dioph = app.add_subcommand("dioph", "gaps of k xi mod 1");
  dioph->add_option("--xi", cfg.xi, "golden or a number in (0, 1)");
  dioph->add_option("--n", cfg.n_grid, "sequence lengths")->delimiter(',');
  dioph->add_option("--csv", csv_out, "write CSV to this file");

  auto* audit = app.add_subcommand("audit-all", "run every explicit-constant audit over a corpus");
  audit->add_option("--corpus", cfg.corpus_dir, "directory of .eul files (default: $EULERLAB_CORPUS, else built in)");
  audit->add_option("--replicas", cfg.replicas);
  audit->add_option("--csv", csv_out, "write CSV to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForVersion& e) {
    throw HelpRequested{"eulerlab 0.1.0\n"};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.format = format == "json" ? Format::json : Format::csv;
  if (!csv_out.empty()) {
    cfg.out = csv_out;
    cfg.format = Format::csv;
  }
  if (holding != -1.0) {
    if (!(holding >= 0.0 && holding < 1.0)) throw UsageError("--holding must lie in [0, 1)");
    cfg.holding = holding;
  }
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) throw UsageError("--eps must lie in (0, 1)");
  for (double a : cfg.gmt_a) {
    if (!(a > 0.0 && a < 1.0)) throw UsageError("--gmt-a values must lie in (0, 1)");
  }
  if (exact && cfg.mc) throw UsageError("--exact and --mc are exclusive");
  if (cfg.replicas == 0) throw UsageError("--replicas must be positive");
  if (!cfg.graph_file.empty() && !cfg.gen_spec.empty() && cfg.subcommand != "gen") {
    throw UsageError("give --graph or --gen, not both");
  }
  return cfg;
}

ExperimentReport run(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.workers) set_default_workers(cfg.workers);
  ExperimentReport rep;
  rep.config = cfg;
  const std::string& s = cfg.subcommand;
  if (s == "validate") run_validate(cfg, rep);
  else if (s == "gen") run_gen(cfg, rep);
  else if (s == "mix") run_mix(cfg, rep);
  else if (s == "spectral") run_spectral(cfg, rep);
  else if (s == "hit") run_hit(cfg, rep);
  else if (s == "explore") run_explore(cfg, rep);
  else if (s == "gadget") run_gadget(cfg, rep);
  else if (s == "dioph") run_dioph(cfg, rep);
  else if (s == "audit-all") run_audit_all(cfg, rep);
  else throw UsageError("unknown subcommand '" + s + "'");
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["subcommand"] = c.subcommand;
  if (!c.graph_file.empty()) j["graph"] = c.graph_file;
  if (!c.gen_spec.empty()) j["gen"] = c.gen_spec;
  j["holding"] = c.holding ? json(*c.holding) : json(nullptr);
  j["seed"] = c.seed;
  j["replicas"] = c.replicas;
  j["format"] = c.format == Format::json ? "json" : "csv";
  if (c.subcommand == "mix") {
    j["metric"] = c.metric;
    j["eps"] = c.eps;
    j["times"] = c.times;
  } else if (c.subcommand == "spectral") {
    j["profile"] = c.profile;
    j["exact"] = c.exact_profile;
    j["gmt_a"] = c.gmt_a;
  } else if (c.subcommand == "hit") {
    j["mode"] = c.matrix ? "matrix" : c.cover ? "cover" : "collide";
    if (!c.collide.empty()) j["collide"] = c.collide;
    j["start"] = c.start;
    j["horizon"] = c.horizon;
  } else if (c.subcommand == "explore") {
    j["k"] = c.k;
    j["start"] = c.start;
  } else if (c.subcommand == "gadget") {
    j["n"] = c.n_grid;
    j["alpha"] = c.alphas;
    j["eps"] = c.eps;
    j["mc"] = c.mc;
    j["return_times"] = c.return_times;
  } else if (c.subcommand == "dioph") {
    j["xi"] = c.xi;
    j["n"] = c.n_grid;
  } else if (c.subcommand == "audit-all") {
    j["corpus"] = c.corpus_dir;
  }
  return j;
}

json to_json(const ExperimentReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = to_json(r.config);
  j["tables"] = json::array();
  for (const auto& t : r.tables) {
    json rows = json::array();
    for (const auto& row : t.rows) rows.push_back(row);
    j["tables"].push_back({{"name", t.name}, {"columns", t.columns}, {"rows", rows}});
  }
  j["verdicts"] = json::array();
  for (const auto& v : r.verdicts) {
    j["verdicts"].push_back(
        {{"graph", v.graph}, {"bound", v.bound}, {"checked", v.checked}, {"violations", v.violations}, {"example", v.example}});
  }
  j["passed"] = r.passed();
  return j;
}

std::string emit(const ExperimentReport& r, Format format) {
  if (!r.text.empty() || r.config.subcommand == "gen") return r.text;
  if (format == Format::json) return to_json(r).dump(2) + "\n";
  std::ostringstream out;
  for (std::size_t i = 0; i < r.tables.size(); ++i) {
    if (r.tables.size() > 1) out << (i ? "\n" : "") << "# " << r.tables[i].name << '\n';
    write_table(out, r.tables[i]);
  }
  return out.str();
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::string where = "eulerlab";
  try {
    ExperimentConfig cfg = parse_args(argc, argv);
    where += " " + cfg.subcommand;
    ExperimentReport rep = run(cfg);
    const std::string text = emit(rep, cfg.format);
    if (cfg.out.empty()) {
      out << text;
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f || !(f << text)) {
        err << where << ": cannot write " << cfg.out << '\n';
        return 2;
      }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", rep.wall_seconds);
    err << where << ": " << buf << " s\n";
    for (const auto& v : rep.verdicts) {
      if (v.violations) err << where << ": VIOLATION " << v.graph << " " << v.bound << " " << v.example << '\n';
    }
    return rep.passed() ? 0 : 1;
  } catch (const HelpRequested& h) {
    out << h.text;
    return 0;
  } catch (const AuditViolation& e) {
    err << where << ": audit violation: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << where << ": " << e.what() << '\n';
    return 2;
  }
}

}  // namespace eulerlab::cli
