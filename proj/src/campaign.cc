// Copyright 2026 The qualsmith Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qualsmith/campaign.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <deque>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "qualsmith/hash.h"
#include "qualsmith/lowering.h"

namespace qualsmith {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class WorkerPool {
 public:
  explicit WorkerPool(int n) {
    for (int i = 0; i < n; ++i) threads_.emplace_back([this] { Loop(); });
  }
  ~WorkerPool() {
    {
      std::lock_guard<std::mutex> l(mu_);
      stop_ = true;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
  }
  void Submit(std::function<void()> job) {
    {
      std::lock_guard<std::mutex> l(mu_);
      jobs_.push_back(std::move(job));
      ++pending_;
    }
    cv_.notify_one();
  }
  // Waits for every submitted job, then rethrows the first failure.
  void Wait() {
    std::unique_lock<std::mutex> l(mu_);
    idle_.wait(l, [this] { return pending_ == 0; });
    if (error_) std::rethrow_exception(std::exchange(error_, nullptr));
  }

 private:
  void Loop() {
    while (true) {
      std::function<void()> job;
      {
        std::unique_lock<std::mutex> l(mu_);
        cv_.wait(l, [this] { return stop_ || !jobs_.empty(); });
        if (jobs_.empty()) return;
        job = std::move(jobs_.front());
        jobs_.pop_front();
      }
      try {
        job();
      } catch (...) {
        std::lock_guard<std::mutex> l(mu_);
        if (!error_) error_ = std::current_exception();
      }
      std::lock_guard<std::mutex> l(mu_);
      if (--pending_ == 0) idle_.notify_all();
    }
  }

  std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable idle_;
  std::deque<std::function<void()>> jobs_;
  std::vector<std::thread> threads_;
  std::size_t pending_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
};

void WriteFile(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int Sample(Rng& rng, std::pair<int, int> r) {
  return r.first == r.second ? r.first : rng.Range(r.first, r.second);
}

double Sample(Rng& rng, std::pair<double, double> r) {
  if (r.first == r.second) return r.first;
  double u = static_cast<double>(rng.Next() >> 11) * 0x1.0p-53;
  return r.first + (r.second - r.first) * u;
}

template <typename T>
nlohmann::json RangeJson(std::pair<T, T> r) {
  return nlohmann::json::array({r.first, r.second});
}

template <typename T>
void RangeFrom(const nlohmann::json& j, const char* key, std::pair<T, T>& r) {
  if (!j.contains(key)) return;
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 2) {
    throw std::invalid_argument(std::string("range ") + key +
                                " must be [lo, hi]");
  }
  r = {a[0].get<T>(), a[1].get<T>()};
}

std::array<std::size_t, kAllKinds.size()> CountByKind(const ConstraintSet& cs) {
  std::array<std::size_t, kAllKinds.size()> n{};
  for (PlaceholderId id : cs.Ids()) ++n[KindIndex(cs.Get(id).kind)];
  return n;
}

nlohmann::json KindCounts(const std::array<std::size_t, kAllKinds.size()>& n) {
  nlohmann::json j;
  for (QualifierKind k : kAllKinds)
    j[std::string(KindName(k))] = n[KindIndex(k)];
  return j;
}

std::string Pad(std::size_t i) {
  std::ostringstream s;
  s << std::setw(6) << std::setfill('0') << i;
  return s.str();
}

}  // namespace

FlagRanges FlagRanges::PointAt(const GeneratorConfig& c) {
  FlagRanges r;
  r.contracts = {c.contracts, c.contracts};
  r.functions_per_contract = {c.functions_per_contract,
                              c.functions_per_contract};
  r.state_variables = {c.state_variables, c.state_variables};
  r.structs = {c.structs, c.structs};
  r.modifiers = {c.modifiers, c.modifiers};
  r.max_parameters = {c.max_parameters, c.max_parameters};
  r.statements_per_body = {c.statements_per_body, c.statements_per_body};
  r.max_statement_depth = {c.max_statement_depth, c.max_statement_depth};
  r.max_expression_depth = {c.max_expression_depth, c.max_expression_depth};
  r.array_probability = {c.array_probability, c.array_probability};
  r.mapping_probability = {c.mapping_probability, c.mapping_probability};
  r.toggle_features = false;
  return r;
}

FlagRanges FlagRanges::Defaults() {
  FlagRanges r;
  r.contracts = {1, 3};
  r.functions_per_contract = {1, 3};
  r.state_variables = {0, 3};
  r.structs = {0, 2};
  r.modifiers = {0, 2};
  r.max_parameters = {0, 3};
  r.statements_per_body = {2, 6};
  r.max_statement_depth = {1, 3};
  r.max_expression_depth = {2, 4};
  r.array_probability = {0, 0.3};
  r.mapping_probability = {0, 0.3};
  r.toggle_features = true;
  return r;
}

void FlagRanges::Validate() const {
  auto check = [](auto r, auto lo, auto hi, const char* what) {
    if (r.first > r.second || r.first < lo || r.second > hi) {
      throw ConfigError(std::string("bad flag range: ") + what);
    }
  };
  check(contracts, 1, 8, "contracts");
  check(functions_per_contract, 0, 64, "functions_per_contract");
  check(state_variables, 0, 64, "state_variables");
  check(structs, 0, 64, "structs");
  check(modifiers, 0, 64, "modifiers");
  check(max_parameters, 0, 16, "max_parameters");
  check(statements_per_body, 1, 64, "statements_per_body");
  check(max_statement_depth, 0, 16, "max_statement_depth");
  check(max_expression_depth, 0, 16, "max_expression_depth");
  check(array_probability, 0.0, 1.0, "array_probability");
  check(mapping_probability, 0.0, 1.0, "mapping_probability");
}

nlohmann::json FlagRanges::ToJson() const {
  return {{"contracts", RangeJson(contracts)},
          {"functions_per_contract", RangeJson(functions_per_contract)},
          {"state_variables", RangeJson(state_variables)},
          {"structs", RangeJson(structs)},
          {"modifiers", RangeJson(modifiers)},
          {"max_parameters", RangeJson(max_parameters)},
          {"statements_per_body", RangeJson(statements_per_body)},
          {"max_statement_depth", RangeJson(max_statement_depth)},
          {"max_expression_depth", RangeJson(max_expression_depth)},
          {"array_probability", RangeJson(array_probability)},
          {"mapping_probability", RangeJson(mapping_probability)},
          {"toggle_features", toggle_features}};
}

FlagRanges FlagRanges::FromJson(const nlohmann::json& j) {
  FlagRanges r = Defaults();
  RangeFrom(j, "contracts", r.contracts);
  RangeFrom(j, "functions_per_contract", r.functions_per_contract);
  RangeFrom(j, "state_variables", r.state_variables);
  RangeFrom(j, "structs", r.structs);
  RangeFrom(j, "modifiers", r.modifiers);
  RangeFrom(j, "max_parameters", r.max_parameters);
  RangeFrom(j, "statements_per_body", r.statements_per_body);
  RangeFrom(j, "max_statement_depth", r.max_statement_depth);
  RangeFrom(j, "max_expression_depth", r.max_expression_depth);
  RangeFrom(j, "array_probability", r.array_probability);
  RangeFrom(j, "mapping_probability", r.mapping_probability);
  if (j.contains("toggle_features")) {
    r.toggle_features = j.at("toggle_features").get<bool>();
  }
  r.Validate();
  return r;
}

GeneratorConfig ExploreFlags(const GeneratorConfig& base,
                             const FlagRanges& ranges, Rng& rng) {
  ranges.Validate();
  GeneratorConfig c = base;
  c.contracts = Sample(rng, ranges.contracts);
  c.functions_per_contract = Sample(rng, ranges.functions_per_contract);
  c.max_functions_per_contract =
      std::max(c.max_functions_per_contract, c.functions_per_contract);
  c.state_variables = Sample(rng, ranges.state_variables);
  c.structs = Sample(rng, ranges.structs);
  c.modifiers = Sample(rng, ranges.modifiers);
  c.max_parameters = Sample(rng, ranges.max_parameters);
  c.statements_per_body = Sample(rng, ranges.statements_per_body);
  c.max_statement_depth = Sample(rng, ranges.max_statement_depth);
  c.max_expression_depth = Sample(rng, ranges.max_expression_depth);
  c.array_probability = Sample(rng, ranges.array_probability);
  c.mapping_probability = Sample(rng, ranges.mapping_probability);
  if (ranges.toggle_features) {
    c.dynamic_arrays = rng.Chance(0.5);
    c.strings = rng.Chance(0.5);
    c.addresses = rng.Chance(0.5);
    c.contract_values = rng.Chance(0.5);
  }
  c.Validate();
  return c;
}

void CampaignConfig::Validate() const {
  if (gen_limit < 1) throw ConfigError("--gen must be >= 1");
  if (!iterations && !duration_s) {
    throw ConfigError("an iteration count or a duration is required");
  }
  if (iterations && *iterations == 0)
    throw ConfigError("iterations must be > 0");
  if (duration_s && !(*duration_s > 0))
    throw ConfigError("duration must be > 0");
  if (out_dir.empty()) throw ConfigError("an output directory is required");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  try {
    gen.Validate();
    if (explore_flags) ranges.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (generate_only) return;
  if (targets.empty()) {
    throw ConfigError("at least one target is required unless generate-only");
  }
  std::set<std::string> names;
  for (const auto& t : targets) {
    if (!names.insert(t.name).second) {
      throw ConfigError("duplicate target name: " + t.name);
    }
    ValidateTarget(t);
  }
}

void ApplyEnvOverrides(std::vector<ToolchainTarget>& targets) {
  for (auto& t : targets) {
    std::string var = "QUALSMITH_TARGET_";
    for (char ch : t.name) {
      var +=
          std::isalnum(static_cast<unsigned char>(ch))
              ? static_cast<char>(std::toupper(static_cast<unsigned char>(ch)))
              : '_';
    }
    if (const char* v = std::getenv(var.c_str()); v && *v) t.executable = v;
  }
}

Throughput ReportThroughput(const std::vector<IterationTiming>& timings) {
  if (timings.empty()) throw std::invalid_argument("no completed iterations");
  std::vector<double> tps, pps;
  for (const auto& t : timings) {
    double s = std::max(t.seconds, 1e-9);
    tps.push_back(static_cast<double>(t.templates) / s);
    pps.push_back(static_cast<double>(t.programs) / s);
  }
  return {Summarize(tps).median, Summarize(pps).median};
}

nlohmann::json CampaignReport::ToJson() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["iterations"] = templates.size();
  j["programs"] = programs;
  j["resumed_verdicts"] = resumed;
  j["corpus_hash"] = corpus_hash;
  j["throughput"] = {{"templates_per_s", throughput.templates_per_s},
                     {"programs_per_s", throughput.programs_per_s}};
  j["validity"] = triage.validity;
  j["templates"] = nlohmann::json::array();
  for (const auto& t : templates) {
    nlohmann::json e;
    e["iteration"] = t.iteration;
    e["id"] = t.id;
    e["dir"] = t.dir;
    e["seed"] = t.seed;
    e["placeholders"] = KindCounts(t.placeholders);
    e["placeholders_reduced"] = KindCounts(t.reduced);
    e["space_before"] = SpaceToJson(t.space_before);
    e["space_after"] = SpaceToJson(t.space_after);
    e["substitutions"] = t.substitutions;
    e["programs"] = t.programs;
    e["collapsed"] = t.collapsed;
    e["seconds"] = t.seconds;
    j["templates"].push_back(std::move(e));
  }
  j["tallies"] = nlohmann::json::object();
  for (const auto& [target, counts] : tallies) {
    nlohmann::json c;
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
      c[std::string(CategoryName(static_cast<Category>(i)))] = counts[i];
    }
    j["tallies"][target] = std::move(c);
  }
  j["failures"] = nlohmann::json::array();
  for (const auto& [key, files] : failures) {
    j["failures"].push_back(
        {{"category", std::string(CategoryName(key.category))},
         {"signature", key.signature},
         {"files", files}});
  }
  return j;
}

std::string CorpusHash(const fs::path& out_dir) {
  std::vector<std::pair<std::string, std::string>> files;
  if (fs::exists(out_dir)) {
    for (const auto& e : fs::recursive_directory_iterator(out_dir)) {
      if (!e.is_regular_file() || e.path().extension() != ".sol") continue;
      files.emplace_back(fs::relative(e.path(), out_dir).generic_string(),
                         Sha256Hex(ReadFile(e.path())));
    }
  }
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& [p, h] : files) all += p + '\0' + h + '\n';
  return Sha256Hex(all);
}

CampaignReport RunCampaign(const CampaignConfig& config) {
  CampaignConfig cfg = config;
  ApplyEnvOverrides(cfg.targets);
  cfg.Validate();
  fs::create_directories(cfg.out_dir);
  const fs::path out = fs::absolute(cfg.out_dir);

  const fs::path ledger_path = out / "verdicts.jsonl";
  std::map<std::pair<std::string, std::string>, Verdict> ledger;
  if (!cfg.generate_only && fs::exists(ledger_path)) {
    std::ifstream in(ledger_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      // A torn final line from an interrupted run is dropped.
      auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded()) continue;
      Verdict v = Verdict::FromJson(j);
      ledger[{v.file, v.target}] = std::move(v);
    }
  }

  CampaignReport report;
  report.seed = cfg.seed;
  std::vector<Verdict> verdicts;
  std::mutex mu;
  std::ofstream ledger_out;
  std::optional<WorkerPool> pool;
  if (!cfg.generate_only) {
    ledger_out.open(ledger_path, std::ios::app);
    if (!ledger_out) throw ConfigError("cannot open " + ledger_path.string());
    pool.emplace(cfg.jobs);
  }

  std::vector<IterationTiming> timings;
  const auto start = Clock::now();
  for (std::size_t i = 0;; ++i) {
    if (cfg.iterations && i >= *cfg.iterations) break;
    if (cfg.duration_s && SecondsSince(start) >= *cfg.duration_s) break;
    const auto t0 = Clock::now();
    const std::uint64_t sub_seed = DeriveSeed(cfg.seed, i);
    GeneratorConfig gen = cfg.gen;
    if (cfg.explore_flags) {
      Rng flags(DeriveSeed(sub_seed, 1));
      gen = ExploreFlags(cfg.gen, cfg.ranges, flags);
    }
    gen.seed = sub_seed;
    GeneratedTemplate g = Generate(gen);
    if (!g.cs.IsSolvable()) {
      throw InvariantViolation("generated constraint set is unsolvable");
    }
    LoweringOptions opts;
    opts.gen_limit = cfg.gen_limit;
    opts.exhaust = cfg.exhaust;
    opts.smtchecker = cfg.smtchecker;
    opts.seed = sub_seed;
    LoweringResult lowered = LowerTemplate(g, opts);

    TemplateStats st;
    st.iteration = i;
    st.id = g.Id();
    st.dir = Pad(i) + "-" + st.id.substr(0, 12);
    st.seed = sub_seed;
    st.placeholders = CountByKind(g.cs);
    st.reduced = CountByKind(lowered.reduced.cs);
    st.space_before = SearchSpace(g.cs);
    st.space_after = SearchSpace(lowered.reduced.cs);
    st.substitutions = lowered.substitutions;
    st.programs = lowered.programs.size();
    st.collapsed = lowered.collapsed;

    const fs::path dir = out / st.dir;
    fs::create_directories(dir);
    WriteFile(dir / "template.json", g.tpl.ToJson().dump(1) + "\n");
    WriteFile(dir / "config.json", gen.ToJson().dump(1) + "\n");
    WriteFile(dir / "constraints.pre.json", g.cs.Dump().dump(1) + "\n");
    nlohmann::json post = lowered.reduced.cs.Dump();
    post["pruned"] = lowered.reduced.pruned;
    WriteFile(dir / "constraints.post.json", post.dump(1) + "\n");
    std::vector<std::string> paths;
    for (const RenderedProgram& p : lowered.programs) {
      const std::string stem = std::to_string(p.index);
      WriteFile(dir / (stem + ".sol"), p.source);
      WriteFile(dir / (stem + ".json"),
                p.Provenance(*g.universe).dump(1) + "\n");
      paths.push_back((dir / (stem + ".sol")).string());
    }
    st.seconds = SecondsSince(t0);
    timings.push_back({st.seconds, 1, st.programs});
    report.programs += st.programs;
    report.templates.push_back(std::move(st));

    if (cfg.generate_only) continue;
    for (const std::string& path : paths) {
      for (const ToolchainTarget& t : cfg.targets) {
        if (auto it = ledger.find({path, t.name}); it != ledger.end()) {
          std::lock_guard<std::mutex> l(mu);
          verdicts.push_back(it->second);
          ++report.resumed;
          continue;
        }
        pool->Submit([&, path, t] {
          Verdict v = RunOne(t, path);
          std::lock_guard<std::mutex> l(mu);
          ledger_out << v.ToJson().dump() << '\n';
          ledger_out.flush();
          verdicts.push_back(std::move(v));
        });
      }
    }
  }
  if (pool) pool->Wait();
  pool.reset();

  std::sort(verdicts.begin(), verdicts.end(),
            [](const Verdict& a, const Verdict& b) {
              return std::tie(a.file, a.target) < std::tie(b.file, b.target);
            });
  for (const ToolchainTarget& t : cfg.targets) {
    if (!cfg.generate_only) report.tallies[t.name] = {};
  }
  for (const Verdict& v : verdicts) {
    ++report.tallies[v.target][static_cast<std::size_t>(v.category)];
  }
  report.failures = Dedupe(verdicts);
  report.triage = FalseAlarmTriage(verdicts);
  if (!timings.empty()) report.throughput = ReportThroughput(timings);
  report.corpus_hash = CorpusHash(out);

  WriteFile(out / "report.json", report.ToJson().dump(1) + "\n");
  if (!cfg.generate_only) {
    WriteFile(out / "triage.json", report.triage.ToJson().dump(1) + "\n");
  }
  return report;
}

}  // namespace qualsmith
