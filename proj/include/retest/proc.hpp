#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <string>
#include <vector>

#include "retest/common.hpp"

namespace retest {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
  bool timed_out = false;
};

namespace detail_proc {

inline std::vector<char*> to_argv(const std::vector<std::string>& args) {
  std::vector<char*> argv;
  for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  return argv;
}

}  // namespace detail_proc

// Runs a command to completion, feeding `stdin_data` and capturing both
// output streams. Kills the child on timeout.
inline RunResult run_process(const std::vector<std::string>& args, std::string_view stdin_data = "",
                             std::chrono::milliseconds timeout = std::chrono::milliseconds(30000)) {
  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (pipe(in_pipe) || pipe(out_pipe) || pipe(err_pipe))
    throw std::runtime_error("pipe() failed");

  pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("fork() failed");
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]})
      close(fd);
    auto argv = detail_proc::to_argv(args);
    execvp(argv[0], argv.data());
    std::fprintf(stderr, "exec failed: %s\n", std::strerror(errno));
    _exit(127);
  }

  close(in_pipe[0]);
  close(out_pipe[1]);
  close(err_pipe[1]);

  // write stdin fully, then close
  size_t written = 0;
  while (written < stdin_data.size()) {
    ssize_t n = write(in_pipe[1], stdin_data.data() + written, stdin_data.size() - written);
    if (n <= 0) break;
    written += static_cast<size_t>(n);
  }
  close(in_pipe[1]);

  RunResult result;
  auto deadline = std::chrono::steady_clock::now() + timeout;
  struct pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  bool open_out = true, open_err = true;
  char buf[4096];
  while (open_out || open_err) {
    auto remain = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (remain.count() <= 0) {
      result.timed_out = true;
      kill(pid, SIGKILL);
      break;
    }
    fds[0].fd = open_out ? out_pipe[0] : -1;
    fds[1].fd = open_err ? err_pipe[0] : -1;
    int rc = poll(fds, 2, static_cast<int>(remain.count()));
    if (rc <= 0) continue;
    if (fds[0].revents) {
      ssize_t n = read(out_pipe[0], buf, sizeof(buf));
      if (n > 0) result.out.append(buf, static_cast<size_t>(n));
      else open_out = false;
    }
    if (fds[1].revents) {
      ssize_t n = read(err_pipe[0], buf, sizeof(buf));
      if (n > 0) result.err.append(buf, static_cast<size_t>(n));
      else open_err = false;
    }
  }
  close(out_pipe[0]);
  close(err_pipe[0]);

  int status = 0;
  waitpid(pid, &status, 0);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  else result.exit_code = -1;
  return result;
}

// Long-lived line-oriented child process (the adapter protocol peer).
class Subprocess {
 public:
  explicit Subprocess(const std::vector<std::string>& args) {
    int in_pipe[2], out_pipe[2];
    if (pipe(in_pipe) || pipe(out_pipe)) throw std::runtime_error("pipe() failed");
    pid_ = fork();
    if (pid_ < 0) throw std::runtime_error("fork() failed");
    if (pid_ == 0) {
      dup2(in_pipe[0], STDIN_FILENO);
      dup2(out_pipe[1], STDOUT_FILENO);
      for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
      auto argv = detail_proc::to_argv(args);
      execvp(argv[0], argv.data());
      _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    stdin_fd_ = in_pipe[1];
    stdout_fd_ = out_pipe[0];
  }

  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  ~Subprocess() { close_and_wait(); }

  void write_line(std::string_view line) {
    std::string data(line);
    data += '\n';
    size_t written = 0;
    while (written < data.size()) {
      ssize_t n = write(stdin_fd_, data.data() + written, data.size() - written);
      if (n <= 0) throw RetriableError("adapter stdin closed");
      written += static_cast<size_t>(n);
    }
  }

  // Reads one newline-terminated line; empty optional on EOF or timeout.
  std::optional<std::string> read_line(std::chrono::milliseconds timeout) {
    auto deadline = std::chrono::steady_clock::now() + timeout;
    while (true) {
      auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return line;
      }
      auto remain = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (remain.count() <= 0) return std::nullopt;
      struct pollfd fd = {stdout_fd_, POLLIN, 0};
      int rc = poll(&fd, 1, static_cast<int>(remain.count()));
      if (rc <= 0) continue;
      char buf[4096];
      ssize_t n = read(stdout_fd_, buf, sizeof(buf));
      if (n <= 0) return std::nullopt;
      buffer_.append(buf, static_cast<size_t>(n));
    }
  }

  int close_and_wait() {
    if (pid_ < 0) return exit_code_;
    if (stdin_fd_ >= 0) close(stdin_fd_);
    if (stdout_fd_ >= 0) close(stdout_fd_);
    stdin_fd_ = stdout_fd_ = -1;
    int status = 0;
    waitpid(pid_, &status, 0);
    pid_ = -1;
    exit_code_ = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return exit_code_;
  }

 private:
  pid_t pid_ = -1;
  int stdin_fd_ = -1;
  int stdout_fd_ = -1;
  int exit_code_ = -1;
  std::string buffer_;
};

}  // namespace retest
