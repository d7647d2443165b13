// varkit: command-line front end for the dyadic, transport, variation and
// verification routines. Exit 0 when every assertion holds, 1 when one fails,
// 2 on usage errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "varkit/ckpipeline.hpp"
#include "varkit/io.hpp"

namespace {

using namespace varkit;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
  double p = 1.0, q = 2.0, r = 2.0;
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  unsigned depth = 6;
  std::string input, out, format = "json";

  // decompose
  std::string a, b;
  // variation
  std::vector<std::int64_t> sample_ids;
  // verify-domination
  std::size_t chain_length = 4, region = 2;
  // bound-trial
  std::string op = "identity";
  std::size_t size = 8, dims = 1, mass_level = 6;
  std::int64_t max_level = 5;
  double p2 = 0.0;
  // sharpness
  double x_min = 10.0, x_max = 1000.0;
  std::size_t points = 25, n_steps = 2000, per_decade = 40;
  std::vector<double> extra_r{2.0};
  bool norms = false;
  // fourier-2d
  std::int64_t max_freq = 4;
  std::size_t torus = 64, max_support = 12;
};

Json exps_json(const RunConfig& c) { return {{"p", c.p}, {"q", c.q}, {"r", c.r}}; }

struct Output {
  Json summary;
  std::string csv;
  bool pass = true;
};

class Failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_output(const RunConfig& c, const Output& o) {
  std::string text = c.format == "csv" ? o.csv : o.summary.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw Error(Errc::invalid_value, "cannot open --out " + c.out);
    f << text;
  }
}

std::string num(double v) { return format_double(v); }

// ---------------------------------------------------------------------------

Output run_decompose(const RunConfig& c) {
  const auto a = DyadicRational::parse(c.a), b = DyadicRational::parse(c.b);
  const auto ivs = decompose_interval(a, b, c.depth);
  Output o;
  Json list = Json::array();
  std::string text;
  std::ostringstream csv;
  csv << "level,index,lower,upper,side\n";
  for (const auto& iv : ivs) {
    const char* side = iv.is_left_sibling() ? "left" : "right";
    list.push_back({{"level", iv.level()}, {"index", iv.index()}, {"lower", iv.lower().to_string()},
                    {"upper", iv.upper().to_string()}, {"side", side}});
    if (!text.empty()) text += ",";
    text += "(" + std::to_string(iv.level()) + "," + std::to_string(iv.index()) + ")";
    csv << iv.level() << ',' << iv.index() << ',' << iv.lower().to_string() << ',' << iv.upper().to_string() << ','
        << side << '\n';
  }
  o.summary = {{"subcommand", "decompose"}, {"config", {{"a", a.to_string()}, {"b", b.to_string()}, {"depth", c.depth}}},
               {"seed", c.seed}, {"intervals", list}, {"text", text}, {"pass", true}};
  o.csv = csv.str();
  return o;
}

Output run_variation(const RunConfig& c) {
  if (c.input.empty()) throw CLI::ValidationError("--input", "variation needs --input family.csv");
  std::ifstream in(c.input);
  if (!in) throw CLI::ValidationError("--input", "cannot open " + c.input);
  const auto family = read_family_csv(in);
  Output o;
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "sample_id,value,witness\n";
  for (std::size_t s = 0; s < family.samples.size(); ++s) {
    if (!c.sample_ids.empty() &&
        std::find(c.sample_ids.begin(), c.sample_ids.end(), family.samples[s]) == c.sample_ids.end())
      continue;
    const auto res = chain_variation(family, c.r, s);
    Json witness = Json::array();
    std::string wtext;
    for (auto k : res.witness) {
      const auto pt = family.grid.point(k);
      witness.push_back(pt);
      std::string t;
      for (auto v : pt) t += (t.empty() ? "" : ":") + std::to_string(v);
      wtext += (wtext.empty() ? "" : " ") + t;
    }
    rows.push_back({{"sample_id", family.samples[s]}, {"value", res.value}, {"witness", witness}});
    csv << family.samples[s] << ',' << num(res.value) << ',' << wtext << '\n';
  }
  o.summary = {{"subcommand", "variation"},
               {"config", {{"r", c.r}, {"input", c.input}, {"dims", family.grid.dims()}, {"grid_size", family.grid.size()}}},
               {"seed", c.seed},
               {"samples", rows},
               {"pass", true}};
  o.csv = csv.str();
  return o;
}

Output run_verify_domination(const RunConfig& c) {
  std::vector<DominationSummary> results(c.trials);
  std::vector<std::uint64_t> seeds(c.trials);
  std::vector<std::size_t> lengths(c.trials);
  parallel_for(c.trials, [&](std::size_t t) {
    seeds[t] = Rng::derive(c.seed, t);
    auto kase = random_domination_case(seeds[t], c.p, 4, 4, c.max_level, c.chain_length);
    lengths[t] = kase.chain.size();
    results[t] = verify_pointwise_domination(kase.ctx, c.r, kase.chain, c.depth, c.region);
  });
  Output o;
  std::ostringstream csv;
  csv << "trial,trial_seed,chain_length,min_slack,max_lhs,labels_distinct,reassembly_error,pass\n";
  double min_slack = std::numeric_limits<double>::infinity(), max_err = 0.0;
  bool labels = true;
  std::string first_failure;
  for (std::size_t t = 0; t < c.trials; ++t) {
    const auto& s = results[t];
    const bool ok = s.pass() && s.max_reassembly_error <= 1e-10;
    csv << t << ',' << seeds[t] << ',' << lengths[t] << ',' << num(s.min_slack) << ',' << num(s.max_lhs) << ','
        << (s.labels_distinct ? 1 : 0) << ',' << num(s.max_reassembly_error) << ',' << (ok ? 1 : 0) << '\n';
    min_slack = std::min(min_slack, s.min_slack);
    max_err = std::max(max_err, s.max_reassembly_error);
    labels = labels && s.labels_distinct;
    if (!ok && o.pass) {
      o.pass = false;
      first_failure = "trial " + std::to_string(t) + " seed " + std::to_string(seeds[t]);
    }
  }
  o.summary = {{"subcommand", "verify-domination"},
               {"config", {{"p", c.p}, {"r", c.r}, {"trials", c.trials}, {"depth", c.depth}, {"chain_length", c.chain_length},
                           {"max_level", c.max_level}, {"region", c.region}}},
               {"seed", c.seed},
               {"min_slack", min_slack},
               {"labels_distinct", labels},
               {"max_reassembly_error", max_err},
               {"pass", o.pass}};
  if (!o.pass) o.summary["first_failure"] = first_failure;
  o.csv = csv.str();
  return o;
}

Output run_verify_norm_chain(const RunConfig& c) {
  const ExponentConfig exps{{c.p}, c.q, c.r};
  struct Row {
    std::uint64_t seed;
    RegistryKind kind;
    NormChainReport rep;
  };
  std::vector<std::vector<Row>> per_trial(c.trials);
  parallel_for(c.trials, [&](std::size_t t) {
    const auto seed = Rng::derive(c.seed, t);
    for (auto kind : kRegistryKinds) {
      Rng rng(seed);
      auto inst = random_instance(2, c.size / 2, c.p, c.mass_level, c.max_level, rng);
      LinearContext ctx(std::move(inst), registry_operator(kind, c.size, rng));
      for (unsigned m = 0; m <= c.depth; ++m)
        for (unsigned n = 0; n <= c.depth; ++n) per_trial[t].push_back({seed, kind, verify_norm_chain(ctx, exps, m, n)});
    }
  });
  Output o;
  std::ostringstream csv;
  csv << "trial,trial_seed,operator,m,n,measured,cell_bound,bound,pass\n";
  double worst = 0.0;
  std::string first_failure;
  for (std::size_t t = 0; t < c.trials; ++t)
    for (const auto& row : per_trial[t]) {
      csv << t << ',' << row.seed << ',' << to_string(row.kind) << ',' << row.rep.m << ',' << row.rep.n << ','
          << num(row.rep.measured) << ',' << num(row.rep.cell_bound) << ',' << num(row.rep.bound) << ','
          << (row.rep.pass ? 1 : 0) << '\n';
      if (row.rep.bound > 0) worst = std::max(worst, row.rep.measured / row.rep.bound);
      if (!row.rep.pass && o.pass) {
        o.pass = false;
        first_failure = "trial " + std::to_string(t) + " seed " + std::to_string(row.seed) + " operator " +
                        std::string(to_string(row.kind)) + " (m,n)=(" + std::to_string(row.rep.m) + "," +
                        std::to_string(row.rep.n) + ")";
      }
    }
  o.summary = {{"subcommand", "verify-norm-chain"},
               {"config", {{"p", c.p}, {"q", c.q}, {"r", c.r}, {"trials", c.trials}, {"depth", c.depth}, {"size", c.size}}},
               {"seed", c.seed},
               {"max_ratio", worst},
               {"budget", 1.0},
               {"pass", o.pass}};
  if (!o.pass) o.summary["first_failure"] = first_failure;
  o.csv = csv.str();
  return o;
}

OperatorSpec cli_operator(const RunConfig& c, Rng& rng) {
  if (c.op == "identity") return OperatorSpec::identity(c.size);
  if (c.op == "zero") return OperatorSpec::zero(c.size);
  if (c.op == "diagonal") return registry_operator(RegistryKind::diagonal, c.size, rng);
  if (c.op == "rank_one") return registry_operator(RegistryKind::rank_one, c.size, rng);
  if (c.op == "dft") return {Dft{c.size}};
  if (c.op == "bilinear") {
    BilinearKernel k;
    for (std::size_t i = 0; i < c.size; ++i) {
      k.g.push_back(rng.unit_disk());
      k.u.push_back(rng.unit_disk());
      k.v.push_back(rng.unit_disk());
    }
    return {k};
  }
  std::ifstream in(c.op);
  if (!in) throw CLI::ValidationError("--operator", "unknown kind or unreadable file '" + c.op + "'");
  try {
    return operator_from_json(Json::parse(in));
  } catch (const Json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
}

Output run_bound_trial(const RunConfig& c) {
  Rng op_rng(Rng::derive(c.seed, std::numeric_limits<std::uint64_t>::max()));
  BoundTrialConfig cfg;
  cfg.op = cli_operator(c, op_rng);
  cfg.exps = ExponentConfig{{c.p}, c.q, c.r};
  if (cfg.op.arity() == 2) cfg.exps.p = {c.p, c.p2 > 0 ? c.p2 : c.p};
  auto factor_split = [&](std::size_t n) {
    if (c.dims == 1) return std::vector<std::size_t>{n};
    std::size_t side = 1;
    while (side * side < n) ++side;
    if (side * side != n || c.dims != 2) throw CLI::ValidationError("--dims", "dims 2 needs a square --size");
    return std::vector<std::size_t>{side, side};
  };
  cfg.slots.clear();
  if (cfg.op.arity() == 2) {
    const auto& k = std::get<BilinearKernel>(cfg.op.payload);
    cfg.slots = {factor_split(k.size1()), factor_split(k.size2())};
  } else {
    cfg.slots = {factor_split(cfg.op.input_size())};
  }
  cfg.max_level = c.max_level;
  cfg.mass_level = static_cast<unsigned>(c.mass_level);
  cfg.seed = c.seed;
  cfg.trials = c.trials;
  const auto rep = bound_trial(cfg);

  Output o;
  o.pass = rep.pass;
  std::ostringstream csv;
  csv << "trial,trial_seed,ratio,maximal_ratio,oracle_gap\n";
  std::string first_failure;
  for (const auto& row : rep.rows) {
    csv << row.trial << ',' << row.trial_seed << ',' << num(row.ratio) << ','
        << (std::isnan(row.maximal_ratio) ? std::string() : num(row.maximal_ratio)) << ',' << num(row.oracle_gap) << '\n';
    const bool bad = row.ratio > rep.budget || row.oracle_gap > 1e-12 ||
                     (!std::isnan(row.maximal_ratio) && row.maximal_ratio > rep.maximal_budget);
    if (bad && first_failure.empty())
      first_failure = "trial " + std::to_string(row.trial) + " seed " + std::to_string(row.trial_seed);
  }
  Json config = {{"operator", to_string(cfg.op.kind())}, {"size", c.size}, {"dims", c.dims}, {"trials", c.trials},
                 {"max_level", c.max_level}, {"mass_level", c.mass_level}};
  config["exponents"] = exps_json(c);
  if (cfg.op.arity() == 2) config["exponents"]["p2"] = cfg.exps.p_at(1);
  o.summary = {{"subcommand", "bound-trial"},
               {"config", config},
               {"seed", c.seed},
               {"certified_norm", rep.certified},
               {"max_ratio", rep.max_ratio},
               {"budget", rep.budget},
               {"max_maximal_ratio", std::isnan(rep.max_maximal_ratio) ? Json(nullptr) : Json(rep.max_maximal_ratio)},
               {"maximal_budget", std::isnan(rep.maximal_budget) ? Json(nullptr) : Json(rep.maximal_budget)},
               {"max_oracle_gap", rep.max_oracle_gap},
               {"pass", rep.pass}};
  if (!rep.pass) o.summary["first_failure"] = first_failure;
  o.csv = csv.str();
  return o;
}

Output run_sharpness(const RunConfig& c) {
  const auto xs = log_spaced(c.x_min, c.x_max, c.points);
  const auto rep = sharpness_experiment(c.p, xs, c.n_steps, c.extra_r);
  const double target = -(1.0 - 1.0 / c.p);
  Output o;
  const bool slope_ok = std::abs(rep.slope - target) <= 0.1;
  o.pass = slope_ok && rep.dominates_lower_bound;
  std::ostringstream csv;
  csv << "x,v_p";
  for (double r : c.extra_r) csv << ",v_r" << num(r);
  csv << ",lower_bound,extremal_points\n";
  for (const auto& row : rep.rows) {
    csv << num(row.x) << ',' << num(row.v_p);
    for (double v : row.v_r) csv << ',' << num(v);
    csv << ',' << num(row.lower_bound) << ',' << row.extremal_points << '\n';
  }
  o.summary = {{"subcommand", "sharpness"},
               {"config", {{"p", c.p}, {"extra_r", c.extra_r}, {"x_min", c.x_min}, {"x_max", c.x_max}, {"points", c.points},
                           {"n_steps", c.n_steps}}},
               {"seed", c.seed},
               {"slope", rep.slope},
               {"target_slope", target},
               {"dominates_lower_bound", rep.dominates_lower_bound},
               {"pass", o.pass}};
  if (c.norms) {
    const std::vector<double> limits{1e2, 1e3, 1e4};
    Json norms = Json::object();
    auto vp = sharpness_norms(c.p, c.p, limits, c.per_decade, c.n_steps);
    norms["r=p"] = vp;
    for (double r : c.extra_r) norms["r=" + num(r)] = sharpness_norms(c.p, r, limits, c.per_decade, c.n_steps);
    o.summary["norm_limits"] = limits;
    o.summary["norms"] = norms;
  }
  o.csv = csv.str();
  return o;
}

Output run_fourier(const RunConfig& c) {
  Output o;
  const double budget = axis_factor(c.p, c.r) * axis_factor(c.p, c.r);
  if (!c.input.empty()) {
    std::ifstream in(c.input);
    if (!in) throw CLI::ValidationError("--input", "cannot open " + c.input);
    const auto a = read_coefficients_csv(in);
    const auto freq = std::max(c.max_freq, a.max_abs_frequency());
    const double ratio = fourier_variation_ratio(a, c.p, c.r, freq, c.torus);
    o.pass = std::isfinite(ratio) && ratio <= budget;
    o.summary = {{"subcommand", "fourier-2d"},
                 {"config", {{"p", c.p}, {"r", c.r}, {"input", c.input}, {"max_freq", freq}, {"points", c.torus}}},
                 {"seed", c.seed},
                 {"max_ratio", ratio},
                 {"budget", budget},
                 {"pass", o.pass}};
    o.csv = "draw,draw_seed,support,ratio\n0,0," + std::to_string(a.entries.size()) + "," + num(ratio) + "\n";
    return o;
  }
  FourierConfig cfg;
  cfg.p = c.p;
  cfg.r = c.r;
  cfg.draws = c.trials;
  cfg.max_freq = c.max_freq;
  cfg.max_support = c.max_support;
  cfg.points = c.torus;
  cfg.seed = c.seed;
  const auto rep = fourier_variation_experiment(cfg);
  o.pass = rep.pass;
  std::ostringstream csv;
  csv << "draw,draw_seed,support,ratio\n";
  for (const auto& row : rep.rows) csv << row.draw << ',' << row.draw_seed << ',' << row.support << ',' << num(row.ratio) << '\n';
  o.summary = {{"subcommand", "fourier-2d"},
               {"config", {{"p", c.p}, {"r", c.r}, {"draws", c.trials}, {"max_freq", c.max_freq}, {"points", c.torus},
                           {"max_support", c.max_support}}},
               {"seed", c.seed},
               {"max_ratio", rep.max_ratio},
               {"budget", rep.budget},
               {"pass", rep.pass}};
  o.csv = csv.str();
  return o;
}

Output run_constants(const RunConfig& c) {
  const auto budget = constants(ExponentConfig{{c.p}, c.q, c.r});
  Output o;
  o.summary = {{"subcommand", "constants"},
               {"config", exps_json(c)},
               {"seed", c.seed},
               {"p", budget.p},
               {"q", budget.q},
               {"r", budget.r},
               {"ck_maximal_constant", budget.ck_maximal_constant},
               {"a_constant", budget.a_constant},
               {"pass", true}};
  o.csv = "p,q,r,ck_maximal_constant,a_constant\n" + num(budget.p) + "," + num(budget.q) + "," + num(budget.r) + "," +
          num(budget.ck_maximal_constant) + "," + num(budget.a_constant) + "\n";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"varkit: dyadic decompositions, r-variation and Christ-Kiselev verification"};
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "64-bit seed")->capture_default_str();
    sub->add_option("--out", c.out, "write output to this file instead of stdout");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  };
  auto exps = [&](CLI::App* sub, bool with_q) {
    sub->add_option("--p", c.p, "input exponent")->capture_default_str();
    if (with_q) sub->add_option("--q", c.q, "output exponent (inf allowed)")->capture_default_str();
    sub->add_option("--r", c.r, "variation exponent")->capture_default_str();
  };

  auto* dec = app.add_subcommand("decompose", "maximal dyadic intervals tiling [a, b)");
  dec->add_option("--a", c.a, "left end, n, n/d or n/2^k")->required();
  dec->add_option("--b", c.b, "right end")->required();
  dec->add_option("--depth", c.depth, "maximum level")->capture_default_str();
  common(dec);
  c.depth = 6;

  auto* var = app.add_subcommand("variation", "r-variation of a truncation family CSV");
  var->add_option("--r", c.r, "variation exponent")->capture_default_str();
  var->add_option("--input", c.input, "family CSV: sample_id,t_1..t_d,re,im")->required();
  var->add_option("--sample", c.sample_ids, "restrict to these sample ids");
  common(var);

  auto* dom = app.add_subcommand("verify-domination", "pointwise fragment domination on random 4x4 instances");
  exps(dom, false);
  dom->add_option("--trials", c.trials)->capture_default_str();
  dom->add_option("--depth", c.depth, "largest cell level in the bound")->capture_default_str();
  dom->add_option("--chain-length", c.chain_length, "longest chain")->capture_default_str();
  dom->add_option("--max-level", c.max_level, "largest filtration level")->capture_default_str();
  dom->add_option("--region", c.region, "fragment mask: 1, 2 or 3")->capture_default_str();
  common(dom);

  auto* nc = app.add_subcommand("verify-norm-chain", "decay of |S_{m,n} f|_q for registry operators");
  exps(nc, true);
  nc->add_option("--trials", c.trials)->capture_default_str();
  nc->add_option("--depth", c.depth, "largest m and n")->capture_default_str();
  nc->add_option("--size", c.size, "atoms (2 x size/2)")->capture_default_str();
  nc->add_option("--max-level", c.max_level)->capture_default_str();
  common(nc);

  auto* bt = app.add_subcommand("bound-trial", "empirical variational bound ratios");
  exps(bt, true);
  bt->add_option("--p2", c.p2, "second slot exponent for bilinear operators");
  bt->add_option("--trials", c.trials)->capture_default_str();
  bt->add_option("--operator", c.op, "identity, zero, diagonal, rank_one, dft, bilinear or a JSON file")
      ->capture_default_str();
  bt->add_option("--size", c.size, "atoms per argument")->capture_default_str();
  bt->add_option("--dims", c.dims, "parameters per argument (1 or 2)")->check(CLI::Range(1, 2))->capture_default_str();
  bt->add_option("--max-level", c.max_level, "largest filtration level")->capture_default_str();
  bt->add_option("--mass-level", c.mass_level, "dyadic level of random masses")->capture_default_str();
  common(bt);

  auto* sh = app.add_subcommand("sharpness", "variation of the truncated Fourier transform of 1_[-1,1]");
  sh->add_option("--p", c.p, "exponent in (1, 2]")->capture_default_str();
  sh->add_option("--extra-r", c.extra_r, "further variation exponents")->capture_default_str();
  sh->add_option("--x-min", c.x_min)->capture_default_str();
  sh->add_option("--x-max", c.x_max)->capture_default_str();
  sh->add_option("--points", c.points, "log-spaced x values")->capture_default_str();
  sh->add_option("--n-steps", c.n_steps, "uniform cutoffs k/n_steps added to the extremal ones")->capture_default_str();
  sh->add_flag("--norms", c.norms, "also integrate |V_r|_{p'} over [1, X] for X = 1e2, 1e3, 1e4");
  sh->add_option("--per-decade", c.per_decade, "quadrature samples per decade")->capture_default_str();
  common(sh);

  auto* fo = app.add_subcommand("fourier-2d", "variation of rectangular partial sums of 2-D Fourier series");
  exps(fo, false);
  fo->add_option("--trials", c.trials, "random draws")->capture_default_str();
  fo->add_option("--input", c.input, "coefficient CSV n_1,n_2,re,im instead of random draws");
  fo->add_option("--max-freq", c.max_freq)->capture_default_str();
  fo->add_option("--points", c.torus, "torus points per dimension")->capture_default_str();
  fo->add_option("--max-support", c.max_support)->capture_default_str();
  common(fo);

  auto* co = app.add_subcommand("constants", "constant budget for exponents (p, q, r)");
  exps(co, true);
  common(co);

  // Defaults that differ per subcommand are applied after parsing.
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    Output o;
    if (dec->parsed()) {
      if (dec->count("--depth") == 0) c.depth = kDefaultDepth;
      o = run_decompose(c);
    } else if (var->parsed()) {
      o = run_variation(c);
    } else if (dom->parsed()) {
      if (dom->count("--p") == 0) c.p = 1.0;
      if (dom->count("--max-level") == 0) c.max_level = 3;
      o = run_verify_domination(c);
    } else if (nc->parsed()) {
      o = run_verify_norm_chain(c);
    } else if (bt->parsed()) {
      o = run_bound_trial(c);
    } else if (sh->parsed()) {
      if (sh->count("--p") == 0) c.p = 1.5;
      o = run_sharpness(c);
    } else if (fo->parsed()) {
      if (fo->count("--p") == 0) c.p = 1.5;
      if (fo->count("--trials") == 0) c.trials = 50;
      o = run_fourier(c);
    } else if (co->parsed()) {
      o = run_constants(c);
    }
    write_output(c, o);
    if (!o.pass) {
      std::cerr << "assertion failed";
      if (o.summary.contains("first_failure")) std::cerr << ": " << o.summary["first_failure"].get<std::string>();
      std::cerr << " (seed " << c.seed << ")\n";
      return kExitFail;
    }
    return 0;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
