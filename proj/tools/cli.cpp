#include "cli.hpp"

#include <glob.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <random>
#include <thread>

#include "nullcode/error.hpp"
#include "nullcode/hashing.hpp"
#include "nullcode/io.hpp"
#include "nullcode/proto.hpp"
#include "nullcode/qsim.hpp"
#include "nullcode/rng.hpp"
#include "nullcode/tbnc.hpp"

namespace nullcode {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  // shared
  std::string config, out, csv, in;
  int preset = 0;
  std::string p;
  double epsilon = std::nan("");
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  unsigned jobs = 1;
  std::uint64_t budget = 0;
  // code
  std::string word, sets;
  double zeta = 0.4;
  long radius = -1;
  double lr_N = 0, lr_m = 0, lr_k = 0, lr_ell = 0, lr_s = 0, lr_r = 0, lr_q = 0;
  // instance
  unsigned block = 0;
  // qsim
  unsigned s = 1;
  std::uint64_t sigma = 4;
  // proto
  unsigned bits = 12, depth = 6;
  double gamma = 0.8;
  std::size_t budget_bits = 12, pairs = 100000;
  std::uint32_t x = 0, y = 0;
  // hash / tbnc
  unsigned r = 0;
  std::size_t lambda = 0, alphabet = 4, n = 4, copies = 4, samples = 200;
  std::uint64_t keys = std::uint64_t{1} << 16;
  std::string points, key, words;
  std::size_t retry_cap = 64;
  bool diagnostics = false;
  // report
  std::vector<std::string> globs;
};

/// Collects JSON-lines records and writes them to --out or the output stream.
class Sink {
 public:
  Sink(const Options& o, std::ostream& out) : path_(o.out), out_(out) {}
  void add(const Json& j) { text_ += j.dump() + "\n"; }
  void raw(const std::string& s) { text_ += s; }
  void flush() {
    if (path_.empty())
      out_ << text_;
    else
      write_text_file(path_, text_);
  }

 private:
  std::string path_;
  std::ostream& out_;
  std::string text_;
};

std::uint64_t budget_of(const Options& o) { return o.budget ? o.budget : state_budget(); }

Json load_config(const Options& o) { return o.config.empty() ? Json::object() : read_json_file(o.config); }

CodeSpec resolve_code(const Options& o, const Json& cfg, std::string* warning = nullptr) {
  if (o.preset) return paper_preset(o.preset, warning);
  if (cfg.contains("kind")) return code_from_json(cfg);
  if (cfg.contains("code")) return code_from_json(cfg.at("code"));
  if (cfg.contains("preset")) return paper_preset(cfg.at("preset").get<int>(), warning);
  throw UsageError("--t or --config naming a code is required");
}

Bias resolve_p(const Options& o, const Json& cfg, const std::string& fallback) {
  if (!o.p.empty()) return Bias::parse(o.p);
  if (cfg.contains("p")) return Bias::parse(cfg.at("p").get<std::string>());
  return Bias::parse(fallback);
}

double resolve_eps(const Options& o, const Json& cfg) {
  if (!std::isnan(o.epsilon)) return o.epsilon;
  if (cfg.contains("epsilon")) return cfg.at("epsilon").get<double>();
  return 0.01;
}

HashFamily resolve_family(const Options& o, const CodeSpec& spec) {
  if (o.r == 0 && o.lambda == 0) return HashFamily::for_code(spec);
  const HashFamily base = HashFamily::for_code(spec);
  return HashFamily(o.r ? o.r : base.r(), o.lambda ? o.lambda : base.lambda(), spec.alphabet_size(),
                    spec.folded_length());
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::uint64_t parse_uint(const std::string& s, const char* flag) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, 0);
    if (used == s.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw UsageError(std::string(flag) + ": not an integer: \"" + s + "\"");
}

FoldedWord parse_word(const std::string& s, const char* flag) {
  if (s.empty()) throw UsageError(std::string(flag) + " is required");
  FoldedWord w;
  for (const auto& part : split(s, ',')) w.push_back(parse_uint(part, flag));
  return w;
}

std::vector<FoldedWord> parse_words(const std::string& s, const char* flag) {
  std::vector<FoldedWord> ws;
  for (const auto& part : split(s, ';')) ws.push_back(parse_word(part, flag));
  return ws;
}

Json word_json(const FoldedWord& w) { return Json(w); }

// Trials run on `jobs` threads; results come back in trial order.
std::vector<Json> parallel_trials(std::size_t trials, unsigned jobs, const std::function<Json(std::size_t)>& fn) {
  std::vector<Json> results(trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < trials;) {
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = trials;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < std::max(1u, jobs); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

Json base_config(const Options& o, const CodeSpec* spec) {
  Json c;
  if (spec) c["code"] = code_to_json(*spec);
  c["seed"] = o.seed;
  c["trials"] = o.trials;
  return c;
}

// ---- code -------------------------------------------------------------------

bool cmd_code_preset(const Options& o, Sink& sink) {
  if (o.preset == 0) throw UsageError("--t is required");
  std::string warning;
  const CodeSpec spec = paper_preset(o.preset, &warning);
  Json j{{"experiment", "code_preset"}, {"t", o.preset}, {"n", spec.folded_length()}, {"q", spec.field().order()},
         {"N", spec.length()}, {"m", spec.folding()}, {"k", spec.degree()}};
  if (!warning.empty()) j["warning"] = warning;
  sink.add(j);
  return true;
}

bool cmd_code_dual(const Options& o, Sink& sink) {
  const Json cfg = load_config(o);
  const CodeSpec spec = resolve_code(o, cfg);
  const CodeSpec d = dual(spec);
  sink.add(Json{{"experiment", "code_dual"}, {"code", code_to_json(spec)}, {"dual", code_to_json(d)},
                {"involution", same_code(dual(d), spec)}});
  return true;
}

bool cmd_code_decode(const Options& o, Sink& sink) {
  const Json cfg = load_config(o);
  const CodeSpec spec = resolve_code(o, cfg);
  const FoldedWord z = parse_word(o.word, "--word");
  Json j{{"experiment", "code_decode"}, {"word", word_json(z)}};
  if (o.radius >= 0) {
    Json list = Json::array();
    for (const Word& w : list_decode(spec, unfold(spec, z), static_cast<std::size_t>(o.radius)))
      list.push_back(word_json(fold(spec, w)));
    j["code"] = "C";
    j["radius"] = o.radius;
    j["list"] = list;
  } else {
    const Bias p = resolve_p(o, cfg, "1/64");
    const DecoderParams params = make_decoder_params(spec, p.value(), resolve_eps(o, cfg));
    const auto out = dual_decode(spec, params, z);
    j["code"] = "C_perp";
    j["radius"] = params.radius_unfolded;
    j["decoded"] = out ? word_json(*out) : Json(nullptr);
  }
  sink.add(j);
  return true;
}

bool cmd_code_listrec(const Options& o, Sink& sink) {
  const Json cfg = load_config(o);
  const CodeSpec spec = resolve_code(o, cfg);
  std::vector<std::vector<Symbol>> sets;
  for (const auto& part : split(o.sets, ';')) {
    std::vector<Symbol> s;
    if (!part.empty())
      for (const auto& e : split(part, ',')) s.push_back(parse_uint(e, "--sets"));
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    sets.push_back(std::move(s));
  }
  if (sets.size() != spec.folded_length()) throw UsageError("--sets needs one ';'-separated set per coordinate");
  sink.add(Json{{"experiment", "code_listrec"}, {"zeta", o.zeta}, {"count", list_recover_count(spec, sets, o.zeta)}});
  return true;
}

bool cmd_code_lrcheck(const Options& o, Sink& sink) {
  const LrCheck c = lr_param_check(o.lr_N, o.lr_m, o.lr_k, o.lr_ell, o.lr_s, o.lr_r, o.zeta, o.lr_q);
  sink.add(Json{{"experiment", "code_lrcheck"}, {"ineq1", c.ineq1}, {"lhs1", c.lhs1}, {"rhs1", c.rhs1},
                {"ineq2", c.ineq2}, {"lhs2", c.lhs2}, {"rhs2", c.rhs2},
                {"list_bound", static_cast<double>(c.list_bound)}});
  return true;
}

// ---- instance ---------------------------------------------------------------

bool cmd_instance_gen(const Options& o, Sink& sink) {
  const Json cfg = load_config(o);
  const CodeSpec spec = resolve_code(o, cfg);
  const OracleInstance inst = o.block ? sample_unfolded_instance(spec, o.block, o.seed)
                                      : sample_instance(spec, resolve_p(o, cfg, "1/64"), o.seed);
  sink.raw(instance_to_json(inst).dump() + "\n");
  return true;
}

OracleInstance load_instance(const Options& o) {
  if (o.in.empty()) throw UsageError("--in is required");
  return instance_from_json(read_json_file(o.in));
}

bool cmd_instance_verify(const Options& o, Sink& sink) {
  const OracleInstance inst = load_instance(o);
  const FoldedWord z = parse_word(o.word, "--word");
  const bool ok = verify(inst, z);
  sink.add(Json{{"experiment", "instance_verify"}, {"word", word_json(z)}, {"valid", ok}});
  return ok;
}

bool cmd_instance_solve(const Options& o, Sink& sink) {
  const OracleInstance inst = load_instance(o);
  Json sols = Json::array();
  for (const auto& z : brute_solve(inst)) sols.push_back(word_json(z));
  sink.add(Json{{"experiment", "instance_solve"}, {"count", sols.size()}, {"solutions", sols}});
  return true;
}

// ---- qsim -------------------------------------------------------------------

bool cmd_qsim_qft(const Options& o, Sink& sink) {
  const FieldCtx f = FieldCtx::standard(o.s);
  const auto m = qft_matrix(f);
  double orth = 0, inverse = 0;
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = 0; b < m.size(); ++b) {
      double mmt = 0, mm = 0;
      for (std::size_t c = 0; c < m.size(); ++c) {
        mmt += m[a][c] * m[b][c];
        mm += m[a][c] * m[c][b];
      }
      orth = std::max(orth, std::abs(mmt - (a == b)));
      inverse = std::max(inverse, std::abs(mm - (a == b)));
    }
  const bool ok = orth <= 1e-12 && inverse <= 1e-12;
  sink.add(Json{{"experiment", "qsim_qft"}, {"q", f.order()}, {"orthogonality_error", orth},
                {"self_inverse_error", inverse}, {"ok", ok}});
  return ok;
}

bool cmd_qsim_lemma51(const Options& o, Sink& sink) {
  const Json cfg = load_config(o);
  const CodeSpec spec = resolve_code(o, cfg);
  const Bias p = resolve_p(o, cfg, "1/16");
  const double eps = resolve_eps(o, cfg);
  const DualDecoder decoder(spec, make_decoder_params(spec, p.value(), eps));
  const DecodeFn decode = decoder_fn(decoder);
  const GoodBadSpec gb = symbol_weight_goodbad(spec, p.value(), eps);
  Json config = base_config(o, &spec);
  config["p"] = p.to_string();
  config["epsilon"] = eps;
  bool ok = true;
  const auto records = parallel_trials(o.trials, o.jobs, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(o.seed, i);
    Json j{{"experiment", "lemma51"}, {"config", config}, {"trial", i}, {"seed", seed}};
    const OracleInstance inst = sample_instance(spec, p, seed);
    try {
      const auto r = lemma51_pipeline(spec, inst, decode, gb, budget_of(o));
      j["epsilon"] = r.epsilon;
      j["delta"] = r.delta;
      j["l2_distance"] = r.l2_distance;
      j["bound"] = r.bound;
      j["tv_distance"] = r.tv_distance;
      j["success_probability"] = run_alg1(inst, decode, budget_of(o)).success_probability;
      j["within_bound"] = r.l2_distance <= r.bound + 1e-9;
    } catch (const Error& e) {
      if (e.code() != Errc::EmptySupport) throw;
      j["error"] = errc_name(e.code());
    }
    return j;
  });
  for (const auto& j : records) {
    if (j.contains("within_bound") && !j["within_bound"].get<bool>()) ok = false;
    sink.add(j);
  }
  return ok;
}

bool cmd_qsim_alg1(const Options& o, Sink& sink) {
  const Json cfg = load_config(o);
  const CodeSpec spec = resolve_code(o, cfg);
  const Bias p = resolve_p(o, cfg, "1/16");
  const double eps = resolve_eps(o, cfg);
  const DualDecoder decoder(spec, make_decoder_params(spec, p.value(), eps));
  const DecodeFn decode = decoder_fn(decoder);
  Json config = base_config(o, &spec);
  config["p"] = p.to_string();
  config["epsilon"] = eps;
  const auto records = parallel_trials(o.trials, o.jobs, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(o.seed, i);
    Json j{{"experiment", "alg1"}, {"config", config}, {"trial", i}, {"seed", seed}};
    const OracleInstance inst = sample_instance(spec, p, seed);
    try {
      const auto r = run_alg1(inst, decode, budget_of(o));
      std::vector<double> w;
      for (const auto& entry : r.distribution) w.push_back(entry.second);
      Rng rng = make_rng(seed, 1);
      std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
      const FoldedWord z = r.distribution.at(pick(rng)).first;
      j["success_probability"] = r.success_probability;
      j["measured"] = word_json(z);
      j["valid"] = verify(inst, z);
    } catch (const Error& e) {
      if (e.code() != Errc::EmptySupport) throw;
      j["error"] = errc_name(e.code());
    }
    return j;
  });
  for (const auto& j : records) sink.add(j);
  return true;
}

bool cmd_qsim_claim66(const Options& o, Sink& sink) {
  const Json cfg = load_config(o);
  const Bias p = resolve_p(o, cfg, "1/4");
  const FieldCtx f = FieldCtx::standard(o.s);
  const auto r = claim66_stats(f, o.sigma, p, o.trials, o.seed);
  sink.add(Json{{"experiment", "claim66"},
                {"config", Json{{"s", o.s}, {"sigma", o.sigma}, {"p", p.to_string()}, {"trials", o.trials},
                                {"seed", o.seed}}},
                {"p", p.value()},
                {"mean", r.mean_w0_sq},
                {"se", r.se_w0_sq},
                {"prob_empty", r.prob_empty},
                {"mean_nonempty", r.mean_w0_sq_nonempty},
                {"per_element_means", r.per_element_means},
                {"max_nonzero_z", r.max_nonzero_z},
                {"exact", r.exact}});
  return true;
}

// ---- proto ------------------------------------------------------------------

InputSet random_subset(unsigned n, Rng& rng) {
  const double density = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  std::bernoulli_distribution keep(density);
  InputSet s;
  for (Input x = 0; x < (Input{1} << n); ++x)
    if (keep(rng)) s.push_back(x);
  if (s.empty()) s.push_back(static_cast<Input>(rng() % (std::uint64_t{1} << n)));
  return s;
}

bool cmd_proto_drp(const Options& o, Sink& sink) {
  Json config{{"bits", o.bits}, {"gamma", o.gamma}, {"seed", o.seed}, {"trials", o.trials}};
  const auto records = parallel_trials(o.trials, o.jobs, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(o.seed, i);
    Rng rng(seed);
    const InputSet set = random_subset(o.bits, rng);
    const auto parts = density_restoring_partition(set, o.gamma, o.bits);
    double codim = 0;
    bool ok = true;
    std::size_t covered = 0;
    for (const auto& part : parts) {
      codim += static_cast<double>(part.members.size()) / static_cast<double>(set.size()) * part.fixed.codim();
      ok = ok && is_subcube_like(part.members, part.fixed, o.gamma, o.bits);
      covered += part.members.size();
    }
    ok = ok && covered == set.size();
    return Json{{"experiment", "drp"}, {"config", config}, {"trial", i}, {"seed", seed}, {"size", set.size()},
                {"parts", parts.size()}, {"expected_codim", codim},
                {"n_minus_hinf", o.bits - std::log2(static_cast<double>(set.size()))}, {"ok", ok}};
  });
  bool ok = true;
  std::string csv = "seed,size,parts,expected_codim,n_minus_hinf,ok\n";
  for (const auto& j : records) {
    ok = ok && j["ok"].get<bool>();
    sink.add(j);
    csv += std::to_string(j["seed"].get<std::uint64_t>()) + "," + std::to_string(j["size"].get<std::size_t>()) +
           "," + std::to_string(j["parts"].get<std::size_t>()) + "," + j["expected_codim"].dump() + "," +
           j["n_minus_hinf"].dump() + "," + (j["ok"].get<bool>() ? "1" : "0") + "\n";
  }
  if (!o.csv.empty()) write_text_file(o.csv, csv);
  return ok;
}

bool cmd_proto_transform(const Options& o, Sink& sink) {
  Json config{{"bits", o.bits}, {"depth", o.depth}, {"gamma", o.gamma}, {"seed", o.seed}, {"trials", o.trials},
              {"pairs", o.pairs}};
  const IndexRelation rel{o.bits, 8};
  const auto records = parallel_trials(o.trials, o.jobs, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(o.seed, i);
    Rng rng(seed);
    auto tree = std::make_shared<const ProtocolTree>(
        random_tree(o.bits, o.depth, rng, [&](const InputSet& a, const InputSet& b) { return rel.best_label(a, b); }));
    const auto t = transform_alg3(tree, o.gamma);
    const auto rep = analyze_transform(*t);
    bool same = true;
    const Input domain = Input{1} << o.bits;
    if (2 * o.bits <= 12) {
      for (Input x = 0; x < domain && same; ++x)
        for (Input y = 0; y < domain && same; ++y) same = t->execute(x, y).output == tree->execute(x, y).output;
    } else {
      for (std::size_t k = 0; k < o.pairs && same; ++k) {
        const auto x = static_cast<Input>(rng() % domain), y = static_cast<Input>(rng() % domain);
        same = t->execute(x, y).output == tree->execute(x, y).output;
      }
    }
    const double cost = static_cast<double>(tree->worst_case_cost());
    const bool ok = same && rep.all_states_subcube_like && rep.max_huffman_excess <= 1 + 1e-12 &&
                    rep.expected_length <= 2 * rep.expected_rounds + rep.entropy + 1e-9;
    return Json{{"experiment", "transform"}, {"config", config}, {"trial", i}, {"seed", seed},
                {"cost", tree->worst_case_cost()}, {"new_cost", rep.worst_case_cost}, {"entropy", rep.entropy},
                {"expected_length", rep.expected_length}, {"expected_rounds", rep.expected_rounds},
                {"entropy_per_bit", cost > 0 ? rep.entropy / cost : 0.0},
                {"huffman_excess", rep.max_huffman_excess}, {"subcube_like", rep.all_states_subcube_like},
                {"outputs_equal", same}, {"ok", ok}};
  });
  bool ok = true;
  for (const auto& j : records) {
    ok = ok && j["ok"].get<bool>();
    sink.add(j);
  }
  return ok;
}

bool cmd_proto_cleanup(const Options& o, Sink& sink) {
  if (2 * o.bits > 20) throw UsageError("--bits: cleanup checks run on every input pair, so N <= 10");
  Json config{{"bits", o.bits}, {"depth", o.depth}, {"gamma", o.gamma}, {"seed", o.seed}, {"trials", o.trials}};
  const IndexRelation rel{o.bits, 8};
  const auto records = parallel_trials(o.trials, o.jobs, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(o.seed, i);
    Rng rng(seed);
    auto tree = std::make_shared<const ProtocolTree>(
        random_tree(o.bits, o.depth, rng, [&](const InputSet& a, const InputSet& b) { return rel.best_label(a, b); }));
    const double err = rel.error_rate(*tree);
    const double eps = std::isnan(o.epsilon) ? std::max(err, 0.02) : o.epsilon;
    const auto clean = cleanup(transform_alg3(tree, o.gamma), eps, rel.verifier());
    const Input domain = Input{1} << o.bits;
    std::uint64_t bottom = 0, wrong = 0;
    for (Input x = 0; x < domain; ++x)
      for (Input y = 0; y < domain; ++y) {
        const Label l = clean->execute(x, y).output;
        if (!l)
          ++bottom;
        else if (!rel.alice_ok(x, *l) || !rel.bob_ok(y, *l))
          ++wrong;
      }
    const double bottom_rate = static_cast<double>(bottom) / (static_cast<double>(domain) * domain);
    return Json{{"experiment", "cleanup"}, {"config", config}, {"trial", i}, {"seed", seed},
                {"original_error", err}, {"epsilon", eps}, {"bottom_rate", bottom_rate}, {"wrong", wrong},
                {"ok", wrong == 0 && (err > eps || bottom_rate <= 2 * eps)}};
  });
  bool ok = true;
  for (const auto& j : records) {
    ok = ok && j["ok"].get<bool>();
    sink.add(j);
  }
  return ok;
}

bool cmd_proto_run(const Options& o, Sink& sink) {
  if (o.in.empty()) throw UsageError("--in (tree file) is required");
  const ProtocolTree tree = tree_from_json(read_json_file(o.in));
  const Execution run = tree.execute(o.x, o.y);
  Json steps = Json::array();
  for (const auto& s : run.steps) steps.push_back(Json{{"owner", party_name(s.owner)}, {"message", s.message}});
  Json j{{"experiment", "proto_run"}, {"x", o.x}, {"y", o.y}, {"transcript", run.transcript()},
         {"steps", steps}, {"output", run.output ? Json(*run.output) : Json(nullptr)},
         {"cost", tree.worst_case_cost()}};
  if (2 * tree.input_bits() <= 20) {
    const auto st = transcript_stats(tree);
    j["entropy"] = st.entropy;
    j["expected_length"] = st.expected_length;
  }
  sink.add(j);
  return true;
}

bool cmd_proto_danger(const Options& o, Sink& sink) {
  const Json cfg = load_config(o);
  const CodeSpec spec = resolve_code(o, cfg);
  const Bias p = resolve_p(o, cfg, "1/2");
  const DangerContext ctx = make_danger_context(spec, o.zeta);
  const BaselineBncProtocol baseline(ctx, o.budget_bits);
  const DangerStats st = danger_track(baseline, ctx, p, o.trials, o.seed);
  Json config = base_config(o, &spec);
  config["p"] = p.to_string();
  config["budget_bits"] = o.budget_bits;
  config["zeta"] = o.zeta;
  sink.add(Json{{"experiment", "danger"}, {"config", config}, {"n", spec.folded_length()},
                {"threshold", ctx.threshold}, {"runs", st.runs}, {"monotone", st.monotone},
                {"counts_consistent", st.counts_consistent}, {"became_dangerous", st.became_dangerous},
                {"dangerous_then_solution", st.dangerous_then_solution}, {"frequency", st.frequency()},
                {"correct_outputs", st.correct_outputs}});
  return st.monotone && st.counts_consistent;
}

// ---- hash -------------------------------------------------------------------

bool cmd_hash_check(const Options& o, Sink& sink) {
  if (o.r == 0 || o.lambda == 0) throw UsageError("--r and --lambda are required");
  const HashFamily fam(o.r, o.lambda, o.alphabet, o.n);
  std::vector<HashPoint> pts;
  for (const auto& part : split(o.points, ',')) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) throw UsageError("--points: expected e:i pairs");
    pts.emplace_back(parse_uint(part.substr(0, colon), "--points"),
                     static_cast<std::size_t>(parse_uint(part.substr(colon + 1), "--points")));
  }
  const bool ok = independence_check(fam, pts);
  sink.add(Json{{"experiment", "hash_check"}, {"family", family_to_json(fam)}, {"points", pts.size()},
                {"independent", ok}});
  return ok;
}

bool cmd_hash_attack(const Options& o, Sink& sink) {
  const Json cfg = load_config(o);
  const CodeSpec spec = resolve_code(o, cfg);
  const HashFamily fam = resolve_family(o, spec);
  const Bias p = resolve_p(o, cfg, "1/2");
  Json config = base_config(o, &spec);
  config["family"] = family_to_json(fam);
  config["p"] = p.to_string();
  const auto records = parallel_trials(o.trials, o.jobs, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(o.seed, i);
    const OracleInstance inst = sample_instance(spec, p, seed);
    const AttackResult res = attack_solve(fam, spec, inst);
    const bool verified = res.key && tbnc_verify(TbncInstance{spec, fam, {inst}}, *res.key, {res.target});
    return Json{{"experiment", "hash_attack"}, {"config", config}, {"trial", i}, {"seed", seed},
                {"found", res.key.has_value()}, {"verified", verified}, {"rank", res.rank},
                {"equations", res.equations}, {"unknowns", res.unknowns}};
  });
  bool ok = true;
  for (const auto& j : records) {
    ok = ok && j["found"].get<bool>() == j["verified"].get<bool>();
    sink.add(j);
  }
  return ok;
}

// ---- tbnc -------------------------------------------------------------------

TbncInstance tbnc_input(const Options& o) {
  if (!o.in.empty()) return tbnc_from_json(read_json_file(o.in));
  const Json cfg = load_config(o);
  const CodeSpec spec = resolve_code(o, cfg);
  return make_tbnc(spec, resolve_family(o, spec), o.copies, o.seed);
}

bool cmd_tbnc_gen(const Options& o, Sink& sink) {
  sink.raw(tbnc_to_json(tbnc_input(o)).dump() + "\n");
  return true;
}

bool cmd_tbnc_verify(const Options& o, Sink& sink) {
  if (o.in.empty()) throw UsageError("--in is required");
  const TbncInstance tb = tbnc_from_json(read_json_file(o.in));
  HashKey key{};
  for (const auto& c : split(o.key, ',')) key.coeffs.push_back(static_cast<Elem>(parse_uint(c, "--key")));
  const bool ok = tbnc_verify(tb, key, parse_words(o.words, "--words"));
  sink.add(Json{{"experiment", "tbnc_verify"}, {"valid", ok}});
  return ok;
}

bool cmd_tbnc_alg2(const Options& o, Sink& sink) {
  const TbncInstance tb = tbnc_input(o);
  Alg2Options opt;
  opt.retry_cap = o.retry_cap;
  opt.diagnostics = o.diagnostics;
  opt.budget = budget_of(o);
  if (!std::isnan(o.epsilon)) opt.epsilon = o.epsilon;
  if (!o.key.empty()) {
    HashKey k;
    for (const auto& c : split(o.key, ',')) k.coeffs.push_back(static_cast<Elem>(parse_uint(c, "--key")));
    opt.forced_key = k;
  }
  Json config{{"t", tb.t()}, {"family", family_to_json(tb.family)}, {"seed", o.seed}, {"trials", o.trials},
              {"retry_cap", o.retry_cap}};
  const auto records = parallel_trials(o.trials, o.jobs, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(o.seed, i);
    Json j{{"experiment", "alg2"}, {"config", config}, {"trial", i}, {"seed", seed}};
    try {
      const Alg2Result r = run_alg2(tb, seed, opt);
      Json copies = Json::array();
      for (const auto& c : r.copies) {
        Json cj{{"solution", word_json(c.solution)}, {"success_probability", c.success_probability},
                {"retries", c.retries}};
        if (c.epsilon) cj["epsilon"] = *c.epsilon;
        if (c.delta) cj["delta"] = *c.delta;
        copies.push_back(cj);
      }
      j["key"] = key_to_json(r.key);
      j["success"] = r.success;
      j["copies"] = copies;
    } catch (const Error& e) {
      if (e.code() != Errc::RetriesExhausted) throw;
      j["success"] = false;
      j["error"] = errc_name(e.code());
    }
    return j;
  });
  for (const auto& j : records) sink.add(j);
  return true;
}

bool cmd_tbnc_totality(const Options& o, Sink& sink) {
  const Json cfg = load_config(o);
  const CodeSpec spec = resolve_code(o, cfg);
  const HashFamily fam = resolve_family(o, spec);
  const TotalityStats st = totality_scan(spec, fam, o.copies, o.keys, o.samples, o.seed);
  Json j{{"experiment", "totality"},
         {"config", Json{{"code", code_to_json(spec)}, {"family", family_to_json(fam)}, {"t", o.copies},
                         {"keys", o.keys}, {"samples", o.samples}, {"seed", o.seed}}},
         {"keys_per_sample", st.keys_per_sample},
         {"keys_enumerated", st.keys_enumerated},
         {"with_good_key", st.with_good_key},
         {"empty_rate", st.empty_rate},
         {"empty_rate_se", st.empty_rate_se},
         {"independent_closed_form", st.independent_closed_form}};
  if (st.exact_empty_rate) j["exact_empty_rate"] = *st.exact_empty_rate;
  if (st.exact_empty_rate_se) j["exact_empty_rate_se"] = *st.exact_empty_rate_se;
  sink.add(j);
  return true;
}

// ---- report -----------------------------------------------------------------

std::vector<std::string> expand_globs(const std::vector<std::string>& patterns) {
  std::set<std::string> files;
  for (const auto& pat : patterns) {
    glob_t g{};
    if (::glob(pat.c_str(), 0, nullptr, &g) == 0)
      for (std::size_t i = 0; i < g.gl_pathc; ++i) files.insert(g.gl_pathv[i]);
    ::globfree(&g);
  }
  return {files.begin(), files.end()};
}

bool cmd_report(const Options& o, Sink& sink) {
  struct Acc {
    std::size_t count = 0;
    double sum = 0, sum_sq = 0;
  };
  std::map<std::string, std::map<std::string, Acc>> stats;
  std::map<std::string, std::size_t> records;
  std::string claim_csv = "p,mean,abs_error\n";
  for (const auto& file : expand_globs(o.globs)) {
    std::ifstream in(file);
    std::string line;
    std::size_t lineno = 0;
    std::string schema;
    std::set<std::string> keys;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const std::string where = file + ":" + std::to_string(lineno);
      Json j;
      try {
        j = Json::parse(line);
      } catch (const nlohmann::json::parse_error&) {
        throw Error(Errc::ParseError, where + ": not a JSON record");
      }
      if (!j.is_object() || !j.contains("experiment") || !j["experiment"].is_string())
        throw Error(Errc::ParseError, where + ": record has no experiment name");
      std::set<std::string> these;
      for (const auto& [k, v] : j.items()) these.insert(k);
      const auto exp = j["experiment"].get<std::string>();
      if (schema.empty()) {
        schema = exp;
        keys = these;
      } else if (exp != schema || these != keys) {
        throw Error(Errc::ParseError, where + ": record schema differs from the first record of the file");
      }
      ++records[exp];
      for (const auto& [k, v] : j.items()) {
        if (k == "seed" || k == "trial" || !(v.is_number() || v.is_boolean())) continue;
        const double x = v.is_boolean() ? (v.get<bool>() ? 1.0 : 0.0) : v.get<double>();
        auto& a = stats[exp][k];
        ++a.count;
        a.sum += x;
        a.sum_sq += x * x;
      }
      if (exp == "claim66") {
        const double p = j["p"].get<double>(), mean = j["mean"].get<double>();
        std::ostringstream row;
        row.precision(12);
        row << p << "," << mean << "," << std::abs(mean - (1 - p)) << "\n";
        claim_csv += row.str();
      }
    }
  }
  std::string csv = "experiment,field,count,mean,sd\n";
  for (const auto& [exp, fields] : stats) {
    Json summary{{"experiment", "report"}, {"source", exp}, {"records", records[exp]}};
    for (const auto& [field, a] : fields) {
      const double n = static_cast<double>(a.count);
      const double mean = a.sum / n;
      const double sd = a.count > 1 ? std::sqrt(std::max(0.0, (a.sum_sq - n * mean * mean) / (n - 1))) : 0.0;
      summary["fields"][field] = Json{{"mean", mean}, {"sd", sd}, {"count", a.count}};
      std::ostringstream row;
      row.precision(12);
      row << exp << "," << field << "," << a.count << "," << mean << "," << sd << "\n";
      csv += row.str();
    }
    sink.add(summary);
  }
  if (!o.csv.empty()) {
    write_text_file(o.csv + "/summary.csv", csv);
    if (records.count("claim66")) write_text_file(o.csv + "/claim66.csv", claim_csv);
  }
  return true;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Experiment driver for folded-code null-codeword problems"};
  app.require_subcommand(1);
  Options o;
  std::function<bool(Sink&)> action;

  auto common = [&](CLI::App* c) {
    c->add_option("--config", o.config, "JSON file with a code or {code, p, epsilon}");
    c->add_option("--t", o.preset, "code preset 1..4");
    c->add_option("--p", o.p, "bias, e.g. 1/64 or 2^-6");
    c->add_option("--eps", o.epsilon, "decoder slack epsilon");
    c->add_option("--seed", o.seed, "64-bit seed");
    c->add_option("--trials", o.trials, "number of trials");
    c->add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1u, 256u));
    c->add_option("--budget", o.budget, "amplitude budget");
    c->add_option("--out", o.out, "output file (default stdout)");
  };
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                  bool (*fn)(const Options&, Sink&)) {
    CLI::App* c = parent->add_subcommand(name, help);
    common(c);
    c->callback([&action, &o, fn] { action = [&o, fn](Sink& s) { return fn(o, s); }; });
    return c;
  };

  CLI::App* code = app.add_subcommand("code", "code construction and decoding");
  code->require_subcommand(1);
  leaf(code, "preset", "print preset parameters", cmd_code_preset);
  leaf(code, "dual", "print the dual code", cmd_code_dual);
  auto* dec = leaf(code, "decode", "decode a folded word", cmd_code_decode);
  dec->add_option("--word", o.word, "comma-separated symbols");
  dec->add_option("--radius", o.radius, "list-decode C within this unfolded radius instead");
  auto* lr = leaf(code, "listrec", "count codewords agreeing with candidate sets", cmd_code_listrec);
  lr->add_option("--sets", o.sets, "per-coordinate sets, e.g. \"0,1;2;;3\"")->required();
  lr->add_option("--zeta", o.zeta, "agreement fraction");
  auto* lc = leaf(code, "lrcheck", "evaluate list-recovery parameter inequalities", cmd_code_lrcheck);
  lc->add_option("--N", o.lr_N)->required();
  lc->add_option("--m", o.lr_m)->required();
  lc->add_option("--k", o.lr_k)->required();
  lc->add_option("--ell", o.lr_ell)->required();
  lc->add_option("--s", o.lr_s)->required();
  lc->add_option("--r", o.lr_r)->required();
  lc->add_option("--q", o.lr_q)->required();
  lc->add_option("--zeta", o.zeta);

  CLI::App* inst = app.add_subcommand("instance", "oracle instances");
  inst->require_subcommand(1);
  leaf(inst, "gen", "sample an instance", cmd_instance_gen)->add_option("--block", o.block, "AND block size");
  auto* iv = leaf(inst, "verify", "check a candidate solution", cmd_instance_verify);
  iv->add_option("--in", o.in)->required();
  iv->add_option("--word", o.word)->required();
  leaf(inst, "solve", "list all solutions", cmd_instance_solve)->add_option("--in", o.in)->required();

  CLI::App* qs = app.add_subcommand("qsim", "state-vector simulation");
  qs->require_subcommand(1);
  leaf(qs, "qft", "check the Fourier matrix", cmd_qsim_qft)->add_option("--s", o.s, "field degree");
  leaf(qs, "lemma51", "distance between actual and ideal states", cmd_qsim_lemma51);
  leaf(qs, "alg1", "simultaneous-message protocol", cmd_qsim_alg1);
  auto* cl = leaf(qs, "claim66", "Fourier weight of biased tables", cmd_qsim_claim66);
  cl->add_option("--s", o.s, "field degree");
  cl->add_option("--sigma", o.sigma, "alphabet size");

  CLI::App* pr = app.add_subcommand("proto", "classical protocols");
  pr->require_subcommand(1);
  auto proto_opts = [&](CLI::App* c) {
    c->add_option("--bits", o.bits, "input bits per player");
    c->add_option("--depth", o.depth, "maximum tree depth");
    c->add_option("--gamma", o.gamma, "density parameter");
  };
  auto* drp = leaf(pr, "drp", "density-restoring partitions of random sets", cmd_proto_drp);
  proto_opts(drp);
  drp->add_option("--csv", o.csv, "CSV summary path");
  auto* tr = leaf(pr, "transform", "transform random trees", cmd_proto_transform);
  proto_opts(tr);
  tr->add_option("--pairs", o.pairs, "sampled input pairs when 2N > 12");
  proto_opts(leaf(pr, "cleanup", "clean transformed random trees", cmd_proto_cleanup));
  auto* run = leaf(pr, "run", "execute a tree file", cmd_proto_run);
  run->add_option("--in", o.in)->required();
  run->add_option("--x", o.x);
  run->add_option("--y", o.y);
  auto* dg = leaf(pr, "danger", "dangerous-codeword ledger of the baseline protocol", cmd_proto_danger);
  dg->add_option("--budget-bits", o.budget_bits, "communication budget");
  dg->add_option("--zeta", o.zeta, "danger fraction");

  CLI::App* hs = app.add_subcommand("hash", "hash family");
  hs->require_subcommand(1);
  auto* hc = leaf(hs, "check", "exact independence check", cmd_hash_check);
  hc->add_option("--r", o.r);
  hc->add_option("--lambda", o.lambda);
  hc->add_option("--alphabet", o.alphabet);
  hc->add_option("--n", o.n);
  hc->add_option("--points", o.points, "e:i,e:i,...")->required();
  auto* ha = leaf(hs, "attack", "Gaussian-elimination key recovery", cmd_hash_attack);
  ha->add_option("--r", o.r);
  ha->add_option("--lambda", o.lambda);

  CLI::App* tb = app.add_subcommand("tbnc", "total problem");
  tb->require_subcommand(1);
  auto tb_opts = [&](CLI::App* c) {
    c->add_option("--copies", o.copies, "number of copies t");
    c->add_option("--r", o.r);
    c->add_option("--lambda", o.lambda);
  };
  tb_opts(leaf(tb, "gen", "sample a t-copy instance", cmd_tbnc_gen));
  auto* tv = leaf(tb, "verify", "check a key and solutions", cmd_tbnc_verify);
  tv->add_option("--in", o.in)->required();
  tv->add_option("--key", o.key, "comma-separated coefficients")->required();
  tv->add_option("--words", o.words, "';'-separated solutions")->required();
  auto* a2 = leaf(tb, "alg2", "simultaneous-message protocol for the total problem", cmd_tbnc_alg2);
  tb_opts(a2);
  a2->add_option("--in", o.in);
  a2->add_option("--key", o.key, "force this key");
  a2->add_option("--retry-cap", o.retry_cap);
  a2->add_flag("--diagnostics", o.diagnostics, "per-copy epsilon and delta");
  auto* tt = leaf(tb, "totality", "scan keys for nonempty solution sets", cmd_tbnc_totality);
  tb_opts(tt);
  tt->add_option("--keys", o.keys, "key budget");
  tt->add_option("--samples", o.samples, "sampled instances");

  auto* rep = leaf(&app, "report", "aggregate result files", cmd_report);
  rep->add_option("globs", o.globs, "result file patterns");
  rep->add_option("--csv", o.csv, "directory for CSV summaries");

  std::vector<std::string> argv_store{"nullcode"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    Sink sink(o, out);
    const bool ok = action(sink);
    sink.flush();
    return ok ? 0 : 1;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error [" << errc_name(e.code()) << "]: " << e.what() << "\n";
    return e.code() == Errc::ParseError || e.code() == Errc::InvalidArgument ? 2 : 1;
  }
}

}  // namespace nullcode
