#include "lazybv/backend.hpp"
#include "lazybv/errors.hpp"
#include "lazybv/smtlib.hpp"

#include <cctype>
#include <cerrno>
#include <csignal>
#include <cstring>
#include <unordered_set>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace lazybv {

struct ExternalBackend::Impl
{
  pid_t pid = -1;
  int to_child = -1;
  int from_child = -1;
  bool dead = false;
  std::string buffer;
  std::string transcript;
  std::unordered_set<Term> declared;

  void start(const ExternalConfig &cfg)
  {
    std::signal(SIGPIPE, SIG_IGN);
    int in[2];
    int out[2];
    if (pipe(in) != 0 || pipe(out) != 0) throw BackendProtocolError("pipe: " + std::string(std::strerror(errno)));
    // Error channel: exec failure is reported through a close-on-exec pipe.
    int err[2];
    if (pipe(err) != 0) throw BackendProtocolError("pipe: " + std::string(std::strerror(errno)));
    fcntl(err[1], F_SETFD, FD_CLOEXEC);
    pid = fork();
    if (pid < 0) throw BackendProtocolError("fork: " + std::string(std::strerror(errno)));
    if (pid == 0) {
      dup2(in[0], STDIN_FILENO);
      dup2(out[1], STDOUT_FILENO);
      close(in[0]);
      close(in[1]);
      close(out[0]);
      close(out[1]);
      close(err[0]);
      std::vector<char *> argv;
      argv.push_back(const_cast<char *>(cfg.path.c_str()));
      for (const auto &a : cfg.args) argv.push_back(const_cast<char *>(a.c_str()));
      argv.push_back(nullptr);
      execvp(cfg.path.c_str(), argv.data());
      const int code = errno;
      [[maybe_unused]] auto n = write(err[1], &code, sizeof code);
      _exit(127);
    }
    close(in[0]);
    close(out[1]);
    close(err[1]);
    to_child = in[1];
    from_child = out[0];
    int code = 0;
    const auto got = read(err[0], &code, sizeof code);
    close(err[0]);
    if (got == static_cast<ssize_t>(sizeof code)) {
      stop();
      throw BackendProtocolError("cannot run '" + cfg.path + "': " + std::strerror(code));
    }
  }

  void stop()
  {
    if (to_child >= 0) close(to_child);
    if (from_child >= 0) close(from_child);
    to_child = from_child = -1;
    if (pid > 0) {
      int status = 0;
      for (int i = 0; i < 50; ++i) {
        if (waitpid(pid, &status, WNOHANG) == pid) {
          pid = -1;
          return;
        }
        usleep(2000);
      }
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      pid = -1;
    }
  }

  void send(const std::string &text)
  {
    if (dead) throw BackendProtocolError("external solver is no longer running");
    transcript += text;
    std::size_t done = 0;
    while (done < text.size()) {
      const auto n = write(to_child, text.data() + done, text.size() - done);
      if (n < 0) {
        if (errno == EINTR) continue;
        dead = true;
        throw BackendProtocolError("write to external solver failed: " + std::string(std::strerror(errno)));
      }
      done += static_cast<std::size_t>(n);
    }
  }

  /// Length of the first complete s-expression in the buffer, or 0.
  [[nodiscard]] std::size_t complete_prefix() const
  {
    std::size_t i = 0;
    while (i < buffer.size() && std::isspace(static_cast<unsigned char>(buffer[i])) != 0) ++i;
    if (i == buffer.size()) return 0;
    if (buffer[i] != '(') {
      std::size_t j = i;
      while (j < buffer.size() && std::isspace(static_cast<unsigned char>(buffer[j])) == 0) ++j;
      return j < buffer.size() ? j : 0;
    }
    int depth = 0;
    for (std::size_t j = i; j < buffer.size(); ++j) {
      const char c = buffer[j];
      if (c == '|' || c == '"') {
        const auto close = buffer.find(c, j + 1);
        if (close == std::string::npos) return 0;
        j = close;
      } else if (c == '(') {
        ++depth;
      } else if (c == ')' && --depth == 0) {
        return j + 1;
      }
    }
    return 0;
  }

  /// Reads one reply; nullopt when the deadline passes first.
  std::optional<SExpr> receive(const Deadline &deadline)
  {
    for (;;) {
      if (const std::size_t len = complete_prefix(); len > 0) {
        const std::string text = buffer.substr(0, len);
        buffer.erase(0, len);
        SExprReader reader(text);
        try {
          auto e = reader.next();
          if (!e) throw BackendProtocolError("empty reply");
          return e;
        } catch (const SyntaxError &err) {
          throw BackendProtocolError(std::string("malformed reply: ") + err.what());
        }
      }
      int wait_ms = -1;
      if (!deadline.unbounded()) {
        const double left = deadline.remaining_seconds();
        if (left <= 0) return std::nullopt;
        wait_ms = static_cast<int>(left * 1000) + 1;
      }
      pollfd p{ from_child, POLLIN, 0 };
      const int r = poll(&p, 1, wait_ms);
      if (r < 0 && errno == EINTR) continue;
      if (r < 0) throw BackendProtocolError("poll: " + std::string(std::strerror(errno)));
      if (r == 0) return std::nullopt;
      char chunk[4096];
      const auto n = read(from_child, chunk, sizeof chunk);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) {
        dead = true;
        throw BackendProtocolError("external solver closed its output");
      }
      buffer.append(chunk, static_cast<std::size_t>(n));
    }
  }
};

ExternalBackend::ExternalBackend(TermTable &table, ExternalConfig config) : Backend(table), impl_(std::make_unique<Impl>())
{
  impl_->start(config);
  impl_->send("(set-option :print-success false)\n(set-logic QF_BV)\n");
}

ExternalBackend::~ExternalBackend()
{
  if (!impl_->dead) {
    try {
      impl_->send("(exit)\n");
    } catch (const BackendProtocolError &) {
    }
  }
  impl_->stop();
}

const std::string &ExternalBackend::transcript() const { return impl_->transcript; }

void ExternalBackend::do_assert(Term t)
{
  std::string out;
  std::vector<Term> roots{ t };
  for (Term s : collect_symbols(table_, roots)) {
    if (!impl_->declared.insert(s).second) continue;
    out += "(declare-const " + print_symbol(table_.node(s).name) + " " + table_.sort(s).to_string() + ")\n";
  }
  out += "(assert " + print_term(table_, t) + ")\n";
  impl_->send(out);
}

Result ExternalBackend::do_check(const Deadline &deadline)
{
  if (impl_->dead) return Result::Unknown;
  impl_->send("(check-sat)\n");
  auto reply = impl_->receive(deadline);
  if (!reply) {
    // The solver cannot be interrupted portably; a late answer would desynchronize the session.
    impl_->dead = true;
    impl_->stop();
    return Result::Unknown;
  }
  if (reply->is_symbol("sat")) return Result::Sat;
  if (reply->is_symbol("unsat")) return Result::Unsat;
  if (reply->is_symbol("unknown")) return Result::Unknown;
  throw BackendProtocolError("unexpected check-sat reply: " + reply->to_string());
}

Model ExternalBackend::do_get_values(std::span<const Term> symbols)
{
  Model m;
  std::vector<Term> asked;
  for (Term s : symbols) {
    if (impl_->declared.contains(s)) {
      asked.push_back(s);
    } else if (table_.sort(s).is_bool()) {
      m.set(s, false);
    } else {
      m.set(s, BvValue::from_u64(table_.width(s), 0));
    }
  }
  if (asked.empty()) return m;
  std::string cmd = "(get-value (";
  for (std::size_t i = 0; i < asked.size(); ++i) cmd += (i ? " " : "") + print_symbol(table_.node(asked[i]).name);
  cmd += "))\n";
  impl_->send(cmd);
  auto reply = impl_->receive(Deadline::never());
  if (!reply || !reply->is_list() || reply->list.size() != asked.size())
    throw BackendProtocolError("unexpected get-value reply: " + (reply ? reply->to_string() : std::string("<none>")));
  for (std::size_t i = 0; i < asked.size(); ++i) {
    const SExpr &pair = reply->list[i];
    if (!pair.is_list() || pair.list.size() != 2) throw BackendProtocolError("malformed get-value pair: " + pair.to_string());
    Value v;
    try {
      v = parse_value(pair.list[1]);
    } catch (const Error &e) {
      throw BackendProtocolError(std::string("unparsable value: ") + e.what());
    }
    const bool ok = table_.sort(asked[i]).is_bool() ? std::holds_alternative<bool>(v)
                                                    : std::holds_alternative<BvValue>(v) && std::get<BvValue>(v).width() == table_.width(asked[i]);
    if (!ok) throw BackendProtocolError("value of wrong sort for " + table_.node(asked[i]).name);
    m.set(asked[i], std::move(v));
  }
  return m;
}

}// namespace lazybv
