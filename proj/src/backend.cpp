#include "dcflex/backend.hpp"

#include <csignal>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

namespace dcflex {

using nlohmann::json;

const char* solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::Timeout: return "timeout";
    case SolveStatus::Error: return "error";
  }
  return "?";
}

std::string default_worker_path() {
  if (const char* env = std::getenv("DCFLEX_WORKER"); env && *env) return env;
#ifdef DCFLEX_WORKER_DEFAULT
  return DCFLEX_WORKER_DEFAULT;
#else
  return "tools/milp_worker.py";
#endif
}

namespace {

// One python worker process with line-buffered JSON on both pipes.
class WorkerProcess {
 public:
  explicit WorkerProcess(std::string script) : script_(std::move(script)) {}
  ~WorkerProcess() { stop(); }

  void ensure_running() {
    if (pid_ > 0) return;
    signal(SIGPIPE, SIG_IGN);
    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0)
      throw std::runtime_error("backend: pipe() failed");
    pid_t pid = fork();
    if (pid < 0) throw std::runtime_error("backend: fork() failed");
    if (pid == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      execlp("python3", "python3", script_.c_str(), static_cast<char*>(nullptr));
      perror("backend: execlp python3");
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    pid_ = pid;
    wfd_ = to_child[1];
    rfd_ = from_child[0];
    buf_.clear();
  }

  void stop() {
    if (pid_ <= 0) return;
    (void)!write(wfd_, "{\"op\":\"quit\"}\n", 14);
    close(wfd_);
    close(rfd_);
    int ms = 0;
    int status = 0;
    while (waitpid(pid_, &status, WNOHANG) == 0 && ms < 2000) {
      usleep(50 * 1000);
      ms += 50;
    }
    if (ms >= 2000) {
      kill(pid_, SIGKILL);
      waitpid(pid_, &status, 0);
    }
    pid_ = -1;
    wfd_ = rfd_ = -1;
  }

  void kill_now() {
    if (pid_ <= 0) return;
    close(wfd_);
    close(rfd_);
    kill(pid_, SIGKILL);
    int status = 0;
    waitpid(pid_, &status, 0);
    pid_ = -1;
    wfd_ = rfd_ = -1;
  }

  bool send_line(const std::string& line) {
    std::string msg = line + "\n";
    size_t off = 0;
    while (off < msg.size()) {
      ssize_t n = write(wfd_, msg.data() + off, msg.size() - off);
      if (n <= 0) return false;
      off += static_cast<size_t>(n);
    }
    return true;
  }

  // Reads one '\n'-terminated line; empty result means EOF or deadline.
  std::string read_line(int timeout_ms, bool* timed_out) {
    *timed_out = false;
    for (;;) {
      size_t nl = buf_.find('\n');
      if (nl != std::string::npos) {
        std::string line = buf_.substr(0, nl);
        buf_.erase(0, nl + 1);
        return line;
      }
      pollfd pfd{rfd_, POLLIN, 0};
      int pr = poll(&pfd, 1, timeout_ms);
      if (pr == 0) {
        *timed_out = true;
        return "";
      }
      if (pr < 0) {
        if (errno == EINTR) continue;
        return "";
      }
      char chunk[65536];
      ssize_t n = read(rfd_, chunk, sizeof(chunk));
      if (n <= 0) return "";  // EOF: worker died
      buf_.append(chunk, static_cast<size_t>(n));
    }
  }

 private:
  std::string script_;
  pid_t pid_ = -1;
  int wfd_ = -1, rfd_ = -1;
  std::string buf_;
};

class SubprocessBackend : public SolverBackend {
 public:
  explicit SubprocessBackend(const std::string& worker_path)
      : worker_(worker_path) {
    worker_.ensure_running();
    json ping{{"id", 0}, {"op", "ping"}};
    if (!worker_.send_line(ping.dump()))
      throw std::runtime_error("backend: cannot reach MILP worker at " + worker_path);
    bool timed_out = false;
    std::string line = worker_.read_line(30000, &timed_out);
    if (line.empty())
      throw std::runtime_error("backend: MILP worker failed to start (" + worker_path + ")" +
                               (timed_out ? " [timeout]" : ""));
    json resp = json::parse(line);
    if (resp.value("status", "") != "ok")
      throw std::runtime_error("backend: worker ping failed: " + line);
    identity_ = resp.value("solver", "unknown") + " (" + resp.value("msg", "") + ")";
  }

  SolveResult solve(const ModelInstance& m, const SolveOptions& opts) override {
    json req;
    req["id"] = ++next_id_;
    req["op"] = "solve";
    req["n"] = m.num_vars();
    req["obj"] = m.obj;
    req["lb"] = m.lb;
    req["ub"] = m.ub;
    req["int"] = m.integrality;
    req["astart"] = m.astart;
    req["acol"] = m.acol;
    req["aval"] = m.aval;
    req["rlo"] = m.rlo;
    req["rhi"] = m.rhi;
    req["opt"] = {{"time_limit", opts.time_limit_s}, {"gap", opts.mip_rel_gap}};
    std::string payload = req.dump();
    int timeout_ms = static_cast<int>(opts.time_limit_s * 1000.0) + 120000;

    for (int attempt = 0; attempt < 2; ++attempt) {
      worker_.ensure_running();
      if (!worker_.send_line(payload)) {
        worker_.kill_now();
        continue;
      }
      bool timed_out = false;
      std::string line = worker_.read_line(timeout_ms, &timed_out);
      if (line.empty()) {
        worker_.kill_now();
        if (timed_out) {
          SolveResult r;
          r.status = SolveStatus::Timeout;
          r.message = "worker unresponsive past the time limit";
          return r;
        }
        continue;  // crashed: respawn and retry once
      }
      ++solves_;
      return parse_response(line);
    }
    SolveResult r;
    r.status = SolveStatus::Error;
    r.message = "MILP worker crashed twice on the same model";
    return r;
  }

  std::string identity() const override { return identity_; }
  int solve_count() const override { return solves_; }

 private:
  static SolveResult parse_response(const std::string& line) {
    SolveResult r;
    json resp = json::parse(line, nullptr, false);
    if (resp.is_discarded()) {
      r.status = SolveStatus::Error;
      r.message = "unparseable worker reply";
      return r;
    }
    std::string st = resp.value("status", "error");
    if (st == "optimal") r.status = SolveStatus::Optimal;
    else if (st == "feasible") r.status = SolveStatus::Feasible;
    else if (st == "infeasible") r.status = SolveStatus::Infeasible;
    else if (st == "unbounded") r.status = SolveStatus::Unbounded;
    else if (st == "timeout") r.status = SolveStatus::Timeout;
    else r.status = SolveStatus::Error;
    r.message = resp.value("msg", "");
    if (resp.contains("obj") && resp["obj"].is_number())
      r.objective = resp["obj"].get<double>();
    if (resp.contains("x") && resp["x"].is_array())
      r.x = resp["x"].get<std::vector<double>>();
    return r;
  }

  WorkerProcess worker_;
  std::string identity_;
  int next_id_ = 0;
  int solves_ = 0;
};

}  // namespace

std::unique_ptr<SolverBackend> SolverBackend::create(const std::string& name) {
  std::string chosen = name;
  if (chosen.empty()) {
    if (const char* env = std::getenv("DCFLEX_BACKEND"); env && *env) chosen = env;
    else chosen = "scipy-highs";
  }
  if (chosen == "scipy-highs")
    return std::make_unique<SubprocessBackend>(default_worker_path());
  throw std::runtime_error("backend: unknown solver backend '" + chosen +
                           "' (supported: scipy-highs)");
}

}  // namespace dcflex
