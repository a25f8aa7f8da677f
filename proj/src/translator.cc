// Copyright 2026 The mtrobust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mtrobust/translator.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <map>
#include <set>
#include <thread>

#include "mtrobust/error.h"
#include "mtrobust/parallel.h"
#include "mtrobust/perturbation.h"
#include "mtrobust/utf8.h"

namespace mtrobust {
namespace {

size_t Levenshtein(const std::u32string& a, const std::u32string& b) {
  std::vector<size_t> row(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    size_t diag = row[0];
    row[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      const size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::vector<std::string> DeletionKeys(const std::u32string& word) {
  std::vector<std::string> keys;
  keys.reserve(word.size() + 1);
  keys.push_back(utf8::Encode(word));
  for (size_t i = 0; i < word.size(); ++i) {
    std::u32string d = word;
    d.erase(i, 1);
    keys.push_back(utf8::Encode(d));
  }
  return keys;
}

std::string Scramble(const std::u32string& word, RandomStream& rng) {
  std::u32string s = word;
  for (size_t i = s.size(); i > 1; --i) {
    std::swap(s[i - 1], s[rng.UniformIndex(i)]);
  }
  if (s == word) std::rotate(s.begin(), s.begin() + 1, s.end());
  return utf8::Encode(s);
}

double ParseDouble(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("bad " + std::string(what) + ": " + std::string(text));
  }
  return value;
}

uint64_t ParseU64(std::string_view text, std::string_view what) {
  uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("bad " + std::string(what) + ": " + std::string(text));
  }
  return value;
}

// Ignores SIGPIPE while feeding a child that may exit early.
class ScopedIgnoreSigpipe {
 public:
  ScopedIgnoreSigpipe() {
    struct sigaction ignore {};
    ignore.sa_handler = SIG_IGN;
    sigemptyset(&ignore.sa_mask);
    sigaction(SIGPIPE, &ignore, &previous_);
  }
  ~ScopedIgnoreSigpipe() { sigaction(SIGPIPE, &previous_, nullptr); }

 private:
  struct sigaction previous_ {};
};

class Fd {
 public:
  explicit Fd(int fd = -1) : fd_(fd) {}
  ~Fd() { Close(); }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  int get() const { return fd_; }
  bool open() const { return fd_ >= 0; }
  void Close() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_;
};

}  // namespace

TranslatorSpec TranslatorSpec::Parse(std::string_view flag) {
  TranslatorSpec spec;
  spec.stub.reset();
  if (flag.starts_with("cmd:")) {
    spec.kind = TranslatorKind::kCommand;
    spec.command_line = std::string(flag.substr(4));
  } else if (flag.starts_with("file:")) {
    spec.kind = TranslatorKind::kFile;
    if (flag.size() == 5) throw UsageError("file: translator needs a path");
    spec.hyp_path = std::filesystem::path(std::string(flag.substr(5)));
  } else if (flag.starts_with("stub:")) {
    spec.kind = TranslatorKind::kStub;
    StubConfig stub;
    std::string_view rest = flag.substr(5);
    const size_t comma = rest.find(',');
    const std::string_view name = rest.substr(0, comma);
    if (name == "identity") {
      stub.name = StubName::kIdentity;
    } else if (name == "degrading") {
      stub.name = StubName::kDegrading;
    } else {
      throw UsageError("unknown stub: " + std::string(name));
    }
    rest = comma == std::string_view::npos ? std::string_view()
                                           : rest.substr(comma + 1);
    while (!rest.empty()) {
      const size_t next = rest.find(',');
      const std::string_view item = rest.substr(0, next);
      rest = next == std::string_view::npos ? std::string_view()
                                            : rest.substr(next + 1);
      const size_t eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw UsageError("bad stub option: " + std::string(item));
      }
      const std::string_view key = item.substr(0, eq);
      const std::string_view value = item.substr(eq + 1);
      if (key == "s" || key == "sensitivity") {
        stub.sensitivity = ParseDouble(value, "stub sensitivity");
      } else if (key == "seed") {
        stub.seed = ParseU64(value, "stub seed");
      } else {
        throw UsageError("unknown stub option: " + std::string(key));
      }
    }
    spec.stub = stub;
  } else {
    throw UsageError("translator must be cmd:, file: or stub:, got " +
                     std::string(flag));
  }
  spec.Validate();
  return spec;
}

std::string TranslatorSpec::ToString() const {
  switch (kind) {
    case TranslatorKind::kCommand:
      return "cmd:" + command_line.value_or("");
    case TranslatorKind::kFile:
      return "file:" + (hyp_path ? hyp_path->string() : std::string());
    case TranslatorKind::kStub:
      if (!stub || stub->name == StubName::kIdentity) return "stub:identity";
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof(buf), stub->sensitivity);
      return "stub:degrading,s=" + std::string(buf, res.ptr) +
             ",seed=" + std::to_string(stub->seed);
  }
  return "";
}

void TranslatorSpec::Validate() const {
  const int payloads = (command_line ? 1 : 0) + (hyp_path ? 1 : 0) +
                       (stub ? 1 : 0);
  if (payloads != 1) {
    throw UsageError("translator spec needs exactly one payload");
  }
  switch (kind) {
    case TranslatorKind::kCommand:
      if (!command_line || command_line->empty()) {
        throw UsageError("command translator needs a command line");
      }
      break;
    case TranslatorKind::kFile:
      if (!hyp_path) throw UsageError("file translator needs a path");
      break;
    case TranslatorKind::kStub:
      if (!stub) throw UsageError("stub translator needs a stub config");
      if (!(stub->sensitivity >= 0.0 && stub->sensitivity <= 1.0)) {
        throw UsageError("stub sensitivity must be in [0, 1]");
      }
      break;
  }
  if (timeout.count() <= 0) throw UsageError("timeout must be positive");
}

StubLexicon::StubLexicon(const SentenceList& training) {
  std::unordered_map<std::string, std::map<std::string, uint64_t>> forms;
  for (const auto& line : training.lines) {
    for (auto& word : utf8::SplitWhitespace(line)) {
      const std::string folded = LowerAll(word);
      ++frequency_[folded];
      ++forms[folded][word];
    }
  }
  for (const auto& [folded, variants] : forms) {
    const auto best = std::max_element(
        variants.begin(), variants.end(), [](const auto& a, const auto& b) {
          return a.second != b.second ? a.second < b.second : a.first > b.first;
        });
    surface_[folded] = best->first;
    for (auto& key : DeletionKeys(utf8::Decode(folded))) {
      deletes_[key].push_back(folded);
    }
  }
}

std::optional<std::string> StubLexicon::Surface(
    const std::string& folded) const {
  const auto it = surface_.find(folded);
  if (it == surface_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> StubLexicon::Correct(
    const std::string& folded) const {
  const std::u32string query = utf8::Decode(folded);
  std::set<std::string> candidates;
  for (const auto& key : DeletionKeys(query)) {
    const auto it = deletes_.find(key);
    if (it == deletes_.end()) continue;
    candidates.insert(it->second.begin(), it->second.end());
  }
  std::optional<std::string> best;
  uint64_t best_freq = 0;
  for (const auto& cand : candidates) {
    if (Levenshtein(query, utf8::Decode(cand)) != 1) continue;
    const uint64_t f = frequency_.at(cand);
    if (!best || f > best_freq) {
      best = cand;
      best_freq = f;
    }
  }
  return best;
}

std::string DegradingStub(std::string_view sentence, double sensitivity,
                          RandomStream& rng, const StubLexicon& lexicon) {
  std::vector<std::string> output;
  for (const auto& word : utf8::SplitWhitespace(sentence)) {
    const std::string folded = LowerAll(word);
    std::string canonical = folded;
    double flagged = 0.0;
    if (!lexicon.empty()) {
      if (const auto surface = lexicon.Surface(folded)) {
        const std::u32string a = utf8::Decode(word);
        const std::u32string b = utf8::Decode(*surface);
        size_t differing = 0;
        for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
          differing += a[i] != b[i] ? 1 : 0;
        }
        flagged = static_cast<double>(differing) /
                  static_cast<double>(std::max<size_t>(a.size(), 1));
      } else {
        flagged = 1.0;
        if (auto corrected = lexicon.Correct(folded)) {
          canonical = std::move(*corrected);
        }
      }
    }
    const double p = sensitivity * flagged;
    if (p > 0.0 && rng.Bernoulli(p)) {
      const std::u32string chars = utf8::Decode(canonical);
      const bool scramblable =
          std::any_of(chars.begin(), chars.end(),
                      [&](char32_t c) { return c != chars.front(); });
      if (!scramblable) continue;  // dropped
      canonical = Scramble(chars, rng);
    }
    output.push_back(std::move(canonical));
  }
  std::string result;
  for (auto it = output.rbegin(); it != output.rend(); ++it) {
    if (!result.empty()) result += ' ';
    result += *it;
  }
  return result;
}

SentenceList RunCommand(const SentenceList& sentences,
                        const std::string& command,
                        std::chrono::seconds timeout) {
  std::string input;
  for (const auto& line : sentences.lines) {
    input += line;
    input += '\n';
  }
  int in_pipe[2];
  int out_pipe[2];
  if (pipe2(in_pipe, O_CLOEXEC) != 0) {
    throw TranslatorError(std::string("pipe: ") + std::strerror(errno));
  }
  if (pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw TranslatorError(std::string("pipe: ") + std::strerror(errno));
  }
  const ScopedIgnoreSigpipe no_sigpipe;
  const pid_t pid = fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) {
      ::close(fd);
    }
    throw TranslatorError(std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    signal(SIGPIPE, SIG_DFL);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  Fd to_child(in_pipe[1]);
  Fd from_child(out_pipe[0]);
  fcntl(to_child.get(), F_SETFL, O_NONBLOCK);
  fcntl(from_child.get(), F_SETFL, O_NONBLOCK);

  const auto deadline = std::chrono::steady_clock::now() + timeout;
  // The shell and everything it started share one process group.
  const auto kill_child = [&](const std::string& why) {
    kill(-pid, SIGKILL);
    waitpid(pid, nullptr, 0);
    throw TranslatorError(why);
  };
  std::string output;
  size_t written = 0;
  if (input.empty()) to_child.Close();
  char buf[1 << 16];
  while (from_child.open()) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      kill_child("translator timed out after " +
                 std::to_string(timeout.count()) + " s");
    }
    pollfd fds[2];
    nfds_t n = 0;
    fds[n++] = {from_child.get(), POLLIN, 0};
    if (to_child.open()) fds[n++] = {to_child.get(), POLLOUT, 0};
    const int ready = poll(fds, n, static_cast<int>(left.count()));
    if (ready < 0 && errno != EINTR) {
      kill_child(std::string("poll: ") + std::strerror(errno));
    }
    if (ready <= 0) continue;
    if (n == 2 && fds[1].revents) {
      const ssize_t w = ::write(to_child.get(), input.data() + written,
                                input.size() - written);
      if (w > 0) {
        written += static_cast<size_t>(w);
        if (written == input.size()) to_child.Close();
      } else if (w < 0 && errno != EAGAIN && errno != EINTR) {
        to_child.Close();  // child stopped reading (EPIPE)
      }
    }
    if (fds[0].revents) {
      const ssize_t r = ::read(from_child.get(), buf, sizeof(buf));
      if (r > 0) {
        output.append(buf, static_cast<size_t>(r));
      } else if (r == 0 || (errno != EAGAIN && errno != EINTR)) {
        from_child.Close();
      }
    }
  }
  to_child.Close();

  int status = 0;
  for (;;) {
    const pid_t done = waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (std::chrono::steady_clock::now() >= deadline) {
      kill_child("translator timed out after " +
                 std::to_string(timeout.count()) + " s");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw TranslatorError("translator command failed (status " +
                          std::to_string(WIFEXITED(status)
                                             ? WEXITSTATUS(status)
                                             : -1) +
                          "): " + command);
  }
  if (const auto bad = utf8::FindInvalid(output)) {
    throw TranslatorError("translator output is not UTF-8 at byte " +
                          std::to_string(*bad));
  }
  std::vector<std::string> lines;
  size_t begin = 0;
  while (begin < output.size()) {
    size_t end = output.find('\n', begin);
    if (end == std::string::npos) end = output.size();
    lines.emplace_back(
        utf8::Strip(std::string_view(output).substr(begin, end - begin)));
    begin = end + 1;
  }
  if (lines.size() != sentences.size()) {
    throw TranslatorError("translator returned " +
                          std::to_string(lines.size()) + " lines for " +
                          std::to_string(sentences.size()) + " inputs");
  }
  return SentenceList(std::move(lines));
}

SentenceList Translate(const SentenceList& sentences,
                       const TranslatorSpec& spec, const StubLexicon* lexicon,
                       int jobs) {
  spec.Validate();
  switch (spec.kind) {
    case TranslatorKind::kCommand:
      return RunCommand(sentences, *spec.command_line, spec.timeout);
    case TranslatorKind::kFile: {
      SentenceList hyps = LoadLines(*spec.hyp_path);
      if (hyps.size() != sentences.size()) {
        throw TranslatorError("hypothesis file " + spec.hyp_path->string() +
                              " has " + std::to_string(hyps.size()) +
                              " lines for " +
                              std::to_string(sentences.size()) + " inputs");
      }
      return hyps;
    }
    case TranslatorKind::kStub:
      break;
  }
  const StubConfig& stub = *spec.stub;
  if (stub.name == StubName::kIdentity) return SentenceList(sentences.lines);
  static const StubLexicon kEmpty;
  const StubLexicon& lex = lexicon ? *lexicon : kEmpty;
  std::vector<std::string> out(sentences.size());
  ParallelFor(sentences.size(), jobs, [&](size_t i) {
    Rng rng(MixSeed(stub.seed, i));
    out[i] = DegradingStub(sentences[i], stub.sensitivity, rng, lex);
  });
  return SentenceList(std::move(out));
}

}  // namespace mtrobust
