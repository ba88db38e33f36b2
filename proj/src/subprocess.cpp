#include "plangen/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "plangen/errors.hpp"

namespace plangen {

namespace {

void drain(int fd, std::string& sink) {
  char buf[4096];
  for (;;) {
    ssize_t n = ::read(fd, buf, sizeof buf);
    if (n > 0) {
      sink.append(buf, static_cast<std::size_t>(n));
      continue;
    }
    if (n < 0 && errno == EINTR) continue;
    break;  // EOF or EAGAIN
  }
}

}  // namespace

RunResult run_command(const std::string& command, double timeout_sec) {
  int out_pipe[2], err_pipe[2];
  if (::pipe(out_pipe) != 0 || ::pipe(err_pipe) != 0)
    fail(Errc::external_failure, "pipe() failed: " + std::string(std::strerror(errno)));

  pid_t pid = ::fork();
  if (pid < 0)
    fail(Errc::external_failure, "fork() failed: " + std::string(std::strerror(errno)));

  if (pid == 0) {
    ::setpgid(0, 0);  // own process group, so a timeout kill reaps children
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(err_pipe[1], STDERR_FILENO);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::close(err_pipe[0]);
    ::close(err_pipe[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }

  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  ::fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
  ::fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);

  RunResult result;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration<double>(timeout_sec > 0 ? timeout_sec : 0);
  bool open_out = true, open_err = true;
  int status = 0;
  bool exited = false;

  while (open_out || open_err || !exited) {
    if (timeout_sec > 0 && std::chrono::steady_clock::now() > deadline) {
      result.timed_out = true;
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      exited = true;
      break;
    }

    struct pollfd fds[2];
    nfds_t nfds = 0;
    if (open_out) fds[nfds++] = {out_pipe[0], POLLIN, 0};
    if (open_err) fds[nfds++] = {err_pipe[0], POLLIN, 0};

    if (nfds > 0) {
      int rv = ::poll(fds, nfds, 50);
      if (rv > 0) {
        for (nfds_t i = 0; i < nfds; ++i) {
          if (!(fds[i].revents & (POLLIN | POLLHUP))) continue;
          bool is_out = fds[i].fd == out_pipe[0];
          drain(fds[i].fd, is_out ? result.out : result.err);
          if (fds[i].revents & POLLHUP) {
            char probe[256];
            if (::read(fds[i].fd, probe, sizeof probe) <= 0)
              (is_out ? open_out : open_err) = false;
          }
        }
      }
    }

    if (!exited) {
      pid_t w = ::waitpid(pid, &status, WNOHANG);
      if (w == pid) {
        exited = true;
        // pick up whatever is still buffered
        drain(out_pipe[0], result.out);
        drain(err_pipe[0], result.err);
        if (nfds == 0) break;
      }
    }
    if (exited && !open_out && !open_err) break;
    if (exited) {
      // pipes may stay open via grandchildren; after exit, drain and stop
      drain(out_pipe[0], result.out);
      drain(err_pipe[0], result.err);
      break;
    }
  }

  ::close(out_pipe[0]);
  ::close(err_pipe[0]);
  if (!result.timed_out) {
    if (WIFEXITED(status))
      result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
      result.exit_code = 128 + WTERMSIG(status);
  }
  return result;
}

}  // namespace plangen
