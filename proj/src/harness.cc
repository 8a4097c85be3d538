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

#include "qualsmith/harness.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <regex>
#include <sstream>

extern char** environ;

namespace qualsmith {

namespace {

constexpr std::array<std::string_view, kCategoryCount> kCategoryNames = {
    "accepted", "rejected-frontend",       "crash",
    "hang",     "internal-compiler-error", "incorrect-behavior-suspect"};

constexpr std::size_t kOutputCap = 1 << 20;

using Clock = std::chrono::steady_clock;

double MsSince(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool Executable(const std::string& path) {
  struct stat st;
  return stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode) &&
         access(path.c_str(), X_OK) == 0;
}

std::string FirstLineWith(const std::string& text,
                          const std::vector<std::string>& patterns) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    for (const auto& p : patterns) {
      if (line.find(p) != std::string::npos) return line;
    }
  }
  return "";
}

std::string FirstNonEmptyLine(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
  }
  return "";
}

}  // namespace

std::string_view CategoryName(Category c) {
  return kCategoryNames[static_cast<std::size_t>(c)];
}

std::optional<Category> ParseCategory(std::string_view s) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == s) return static_cast<Category>(i);
  }
  return std::nullopt;
}

void ValidateTarget(const ToolchainTarget& t) {
  if (t.name.empty()) throw ConfigError("target without a name");
  if (t.timeout_s <= 0)
    throw ConfigError("target " + t.name + ": timeout <= 0");
  if (t.executable.find('/') != std::string::npos) {
    if (!Executable(t.executable)) {
      throw ConfigError("target " + t.name +
                        ": not executable: " + t.executable);
    }
    return;
  }
  const char* path = std::getenv("PATH");
  std::istringstream dirs(path ? path : "");
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (!dir.empty() && Executable(dir + "/" + t.executable)) return;
  }
  throw ConfigError("target " + t.name +
                    ": not found on PATH: " + t.executable);
}

ProcessResult RunProcess(const std::vector<std::string>& argv,
                         double timeout_s) {
  if (argv.empty()) throw std::invalid_argument("empty argv");
  ProcessResult r;
  int fds[2];
  if (pipe2(fds, O_CLOEXEC) != 0) throw std::runtime_error("pipe failed");
  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_addopen(&fa, 0, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_adddup2(&fa, fds[1], 1);
  posix_spawn_file_actions_adddup2(&fa, fds[1], 2);
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  sigset_t empty, all;
  sigemptyset(&empty);
  sigfillset(&all);
  posix_spawnattr_setsigmask(&attr, &empty);
  posix_spawnattr_setsigdefault(&attr, &all);
  posix_spawnattr_setpgroup(&attr, 0);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP |
                                      POSIX_SPAWN_SETSIGMASK |
                                      POSIX_SPAWN_SETSIGDEF);
  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);
  auto t0 = Clock::now();
  pid_t pid = 0;
  int rc = posix_spawnp(&pid, cargv[0], &fa, &attr, cargv.data(), environ);
  posix_spawn_file_actions_destroy(&fa);
  posix_spawnattr_destroy(&attr);
  close(fds[1]);
  if (rc != 0) {
    close(fds[0]);
    throw ConfigError("cannot spawn " + argv[0] + ": " + std::strerror(rc));
  }
  fcntl(fds[0], F_SETFL, fcntl(fds[0], F_GETFL) | O_NONBLOCK);
  auto deadline = t0 + std::chrono::duration_cast<Clock::duration>(
                           std::chrono::duration<double>(timeout_s));
  bool exited = false, eof = false;
  int status = 0;
  char buf[8192];
  auto drain = [&] {
    while (true) {
      ssize_t n = read(fds[0], buf, sizeof buf);
      if (n > 0) {
        if (r.output.size() < kOutputCap) {
          r.output.append(
              buf, static_cast<std::size_t>(std::min<ssize_t>(
                       n, static_cast<ssize_t>(kOutputCap - r.output.size()))));
        }
        continue;
      }
      if (n == 0) eof = true;
      return;
    }
  };
  while (!exited) {
    auto now = Clock::now();
    if (now >= deadline) break;
    int wait_ms = static_cast<int>(std::min<long>(
        50,
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
                .count() +
            1));
    if (!eof) {
      pollfd p{fds[0], POLLIN, 0};
      if (poll(&p, 1, wait_ms) > 0) drain();
    } else {
      usleep(static_cast<useconds_t>(wait_ms) * 1000);
    }
    pid_t w = waitpid(pid, &status, WNOHANG);
    if (w == pid) exited = true;
  }
  if (!exited) {
    r.timed_out = true;
    kill(-pid, SIGKILL);
    waitpid(pid, &status, 0);
  }
  // Leftover members of the group would keep the pipe open.
  kill(-pid, SIGKILL);
  drain();
  close(fds[0]);
  r.wall_ms = MsSince(t0);
  if (!r.timed_out) {
    if (WIFSIGNALED(status)) {
      r.signaled = true;
      r.signal = WTERMSIG(status);
    } else if (WIFEXITED(status)) {
      r.exit_code = WEXITSTATUS(status);
    }
  }
  return r;
}

std::string NormalizeSignature(std::string_view message) {
  static const std::regex kPath(R"((\.{0,2}/[^\s:'"()\[\],]+)+)");
  static const std::regex kHex(R"(0x[0-9a-fA-F]+)");
  static const std::regex kIdent(R"(\b(C|S|E|Err|f|m|v)[0-9]+\b)");
  static const std::regex kNumber(R"(\b[0-9]+\b)");
  static const std::regex kSpace(R"(\s+)");
  std::string s(message);
  s = std::regex_replace(s, kPath, "<path>");
  s = std::regex_replace(s, kHex, "<hex>");
  s = std::regex_replace(s, kIdent, "<id>");
  s = std::regex_replace(s, kNumber, "<n>");
  s = std::regex_replace(s, kSpace, " ");
  auto b = s.find_first_not_of(' ');
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(' ');
  return s.substr(b, e - b + 1);
}

Verdict Classify(const ToolchainTarget& t, const ProcessResult& r) {
  Verdict v;
  v.target = t.name;
  v.exit_code = r.exit_code;
  v.signal = r.signal;
  v.output = r.output;
  v.wall_ms = r.wall_ms;
  bool normal =
      std::find(t.normal_exit_codes.begin(), t.normal_exit_codes.end(),
                r.exit_code) != t.normal_exit_codes.end();
  std::string ice = FirstLineWith(r.output, t.ice_patterns);
  std::string assertion = FirstLineWith(r.output, t.assertion_patterns);
  std::string message;
  if (r.timed_out) {
    v.category = Category::kHang;
    message = "timeout";
  } else if (r.signaled) {
    v.category = Category::kCrash;
    message = "signal " + std::to_string(r.signal) + " " +
              FirstNonEmptyLine(r.output);
  } else if (!ice.empty()) {
    v.category = Category::kInternalCompilerError;
    message = ice;
  } else if (normal && !assertion.empty()) {
    v.category = Category::kIncorrectBehaviorSuspect;
    message = assertion;
  } else if (normal) {
    v.category = Category::kAccepted;
  } else {
    v.category = Category::kRejectedFrontend;
    message = FirstLineWith(r.output, {"Error"});
    if (message.empty()) message = FirstNonEmptyLine(r.output);
  }
  v.signature = NormalizeSignature(message);
  return v;
}

Verdict RunOne(const ToolchainTarget& t, const std::string& program_path) {
  std::vector<std::string> argv = {t.executable};
  for (const auto& a : t.args) {
    std::string s = a;
    for (auto pos = s.find("{file}"); pos != std::string::npos;
         pos = s.find("{file}", pos + program_path.size())) {
      s.replace(pos, 6, program_path);
    }
    argv.push_back(s);
  }
  Verdict v = Classify(t, RunProcess(argv, t.timeout_s));
  v.file = program_path;
  return v;
}

nlohmann::json Verdict::ToJson() const {
  return {{"file", file},
          {"target", target},
          {"category", std::string(CategoryName(category))},
          {"exit_code", exit_code},
          {"signal", signal},
          {"signature", signature},
          {"wall_time_ms", wall_ms},
          {"output", output}};
}

Verdict Verdict::FromJson(const nlohmann::json& j) {
  Verdict v;
  v.file = j.at("file").get<std::string>();
  v.target = j.at("target").get<std::string>();
  auto c = ParseCategory(j.at("category").get<std::string>());
  if (!c) throw std::invalid_argument("unknown verdict category");
  v.category = *c;
  v.exit_code = j.value("exit_code", 0);
  v.signal = j.value("signal", 0);
  v.signature = j.value("signature", "");
  v.wall_ms = j.value("wall_time_ms", 0.0);
  v.output = j.value("output", "");
  return v;
}

std::map<FailureKey, std::vector<std::string>> Dedupe(
    const std::vector<Verdict>& verdicts) {
  std::map<FailureKey, std::vector<std::string>> out;
  for (const Verdict& v : verdicts) {
    if (v.category == Category::kAccepted ||
        v.category == Category::kRejectedFrontend) {
      continue;
    }
    out[{v.category, v.signature}].push_back(v.file);
  }
  return out;
}

TriageBundle FalseAlarmTriage(const std::vector<Verdict>& verdicts) {
  TriageBundle b;
  for (const Verdict& v : verdicts) {
    if (v.category == Category::kAccepted) ++b.accepted;
    if (v.category != Category::kRejectedFrontend) continue;
    ++b.rejected;
    TriageEntry e;
    e.file = v.file;
    std::ifstream in(v.file);
    std::ostringstream src;
    src << in.rdbuf();
    e.source = src.str();
    e.diagnostic = FirstLineWith(v.output, {"Error"});
    if (e.diagnostic.empty()) e.diagnostic = FirstNonEmptyLine(v.output);
    b.entries.push_back(std::move(e));
  }
  std::size_t n = b.accepted + b.rejected;
  b.validity = n ? static_cast<double>(b.accepted) / static_cast<double>(n) : 0;
  return b;
}

nlohmann::json TriageBundle::ToJson() const {
  nlohmann::json j;
  j["validity"] = validity;
  j["accepted"] = accepted;
  j["rejected"] = rejected;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : entries) {
    j["entries"].push_back(
        {{"file", e.file}, {"diagnostic", e.diagnostic}, {"source", e.source}});
  }
  return j;
}

}  // namespace qualsmith
