#include "lazybv/bench.hpp"

#include "lazybv/errors.hpp"
#include "lazybv/smtlib.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

namespace lazybv {

namespace {

double tv_seconds(const timeval &tv) { return static_cast<double>(tv.tv_sec) + static_cast<double>(tv.tv_usec) * 1e-6; }

/// User plus system time of this process and every child it has reaped.
double process_cpu_seconds()
{
  rusage self{};
  rusage children{};
  getrusage(RUSAGE_SELF, &self);
  getrusage(RUSAGE_CHILDREN, &children);
  return tv_seconds(self.ru_utime) + tv_seconds(self.ru_stime) + tv_seconds(children.ru_utime) + tv_seconds(children.ru_stime);
}

std::string read_file(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Job
{
  std::size_t index;
  std::filesystem::path file;
  std::string benchmark;
  std::string variant;
};

struct Running
{
  Job job;
  int fd;
  std::chrono::steady_clock::time_point started;
};

/// Worker side: one line "status cpu rounds" on `fd`, then _exit.
[[noreturn]] void worker(const Job &job, const RunOptions &options, int fd)
{
  TimedRun r;
  try {
    r = run_file(job.file, variant_config(job.variant), options);
  } catch (const std::exception &e) {
    r.status = RunStatus::Error;
    r.message = e.what();
  }
  char line[128];
  const int n = std::snprintf(line, sizeof line, "%s %.6f %zu\n", std::string(to_string(r.status)).c_str(), r.cpu_seconds, r.rounds);
  // One short write stays below PIPE_BUF, so it is atomic and never blocks on an idle parent.
  [[maybe_unused]] const ssize_t w = ::write(fd, line, static_cast<std::size_t>(n));
  ::close(fd);
  std::fflush(nullptr);
  ::_exit(0);
}

EvalRecord collect(const Running &run, int wstatus)
{
  EvalRecord rec{ run.job.benchmark, run.job.variant, RunStatus::Error, 0, 0 };
  std::string text;
  char buf[256];
  for (;;) {
    const ssize_t n = ::read(run.fd, buf, sizeof buf);
    if (n > 0) {
      text.append(buf, static_cast<std::size_t>(n));
      continue;
    }
    if (n < 0 && errno == EINTR) continue;
    break;
  }
  ::close(run.fd);
  if (!WIFEXITED(wstatus)) return rec;
  std::istringstream in(text);
  std::string status;
  double cpu = 0;
  std::size_t rounds = 0;
  if (in >> status >> cpu >> rounds) {
    rec.status = parse_run_status(status).value_or(RunStatus::Error);
    rec.cpu_seconds = cpu;
    rec.rounds = rounds;
  }
  return rec;
}

}// namespace

RunStatus run_status_of(const SolveResult &r)
{
  switch (r.status) {
  case Result::Sat: return RunStatus::Sat;
  case Result::Unsat: return RunStatus::Unsat;
  case Result::Unknown: break;
  }
  if (r.reason == UnknownReason::Timeout) return RunStatus::Timeout;
  if (r.reason == UnknownReason::BackendFailure) return RunStatus::Error;
  return RunStatus::Unknown;
}

TimedRun run_file(const std::filesystem::path &path, const SchemeConfig &config, const RunOptions &options)
{
  TimedRun out;
  try {
    TermTable table;
    const Script script = parse_script(table, read_file(path));
    const double start = process_cpu_seconds();
    SolveResult r;
    {
      // The backend is destroyed inside the timed region so an external
      // solver process is reaped and its CPU time counted.
      auto backend = make_backend(table, options.backend);
      Limits limits;
      limits.timeout_seconds = options.timeout_seconds;
      r = solve(table, script, config, *backend, limits);
    }
    out.cpu_seconds = process_cpu_seconds() - start;
    out.status = run_status_of(r);
    out.rounds = r.rounds;
    out.message = r.message;
  } catch (const std::exception &e) {
    out.status = RunStatus::Error;
    out.message = e.what();
  }
  return out;
}

std::vector<std::filesystem::path> list_benchmarks(const std::filesystem::path &dir)
{
  std::vector<std::filesystem::path> out;
  if (std::filesystem::is_regular_file(dir)) return { dir };
  for (const auto &e : std::filesystem::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".smt2") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EvalRecord> run_bench(const std::vector<std::filesystem::path> &files, const BenchOptions &options,
  const std::function<void(const EvalRecord &)> &on_record)
{
  for (const auto &v : options.variants) variant_config(v);

  std::vector<Job> jobs;
  for (const auto &f : files) {
    const std::string name = options.root.empty() ? f.string() : std::filesystem::relative(f, options.root).string();
    for (const auto &v : options.variants) jobs.push_back({ jobs.size(), f, name, v });
  }

  std::vector<std::optional<EvalRecord>> done(jobs.size());
  std::size_t emitted = 0;
  auto emit_ready = [&] {
    while (emitted < done.size() && done[emitted]) {
      if (on_record) on_record(*done[emitted]);
      ++emitted;
    }
  };

  const unsigned width = std::max(1u, options.jobs);
  // Past this the worker is considered hung; the loop's own deadline normally fires long before.
  const double kill_after = options.run.timeout_seconds > 0 ? 2 * options.run.timeout_seconds + 5 : 0;
  std::map<pid_t, Running> running;
  std::size_t next = 0;
  std::fflush(nullptr);

  while (next < jobs.size() || !running.empty()) {
    while (next < jobs.size() && running.size() < width) {
      int fds[2];
      if (::pipe(fds) != 0) throw Error(std::string("pipe: ") + std::strerror(errno));
      const pid_t pid = ::fork();
      if (pid < 0) throw Error(std::string("fork: ") + std::strerror(errno));
      if (pid == 0) {
        ::close(fds[0]);
        worker(jobs[next], options.run, fds[1]);
      }
      ::close(fds[1]);
      running.emplace(pid, Running{ jobs[next], fds[0], std::chrono::steady_clock::now() });
      ++next;
    }

    int wstatus = 0;
    const pid_t pid = ::waitpid(-1, &wstatus, WNOHANG);
    if (pid > 0) {
      const auto it = running.find(pid);
      if (it == running.end()) continue;
      done[it->second.job.index] = collect(it->second, wstatus);
      running.erase(it);
      emit_ready();
      continue;
    }
    if (pid < 0 && errno != EINTR && errno != ECHILD) throw Error(std::string("waitpid: ") + std::strerror(errno));

    const auto now = std::chrono::steady_clock::now();
    for (auto it = running.begin(); it != running.end();) {
      const double age = std::chrono::duration<double>(now - it->second.started).count();
      if (kill_after > 0 && age > kill_after) {
        ::kill(it->first, SIGKILL);
        ::waitpid(it->first, &wstatus, 0);
        ::close(it->second.fd);
        done[it->second.job.index] = EvalRecord{ it->second.job.benchmark, it->second.job.variant, RunStatus::Timeout, age, 0 };
        it = running.erase(it);
      } else {
        ++it;
      }
    }
    emit_ready();
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }

  std::vector<EvalRecord> out;
  out.reserve(done.size());
  for (auto &r : done) out.push_back(std::move(*r));
  return out;
}

}// namespace lazybv
