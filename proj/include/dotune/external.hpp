/*
 * external.hpp
 *
 * This source file is part of the dotune project
 *
 * Copyright 2026 the dotune authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <string>

#include <json.hpp>

#include "dotune/target.hpp"

namespace dotune {

struct SubprocessResult {
    int exit_code = -1;
    bool timed_out = false;
    std::string out;
    std::string err;
};

//! Runs `command` through /bin/sh with `input` on stdin, collecting stdout
//! and stderr until exit or the deadline; a timed-out child is killed.
inline SubprocessResult run_subprocess(const std::string& command, const std::string& input,
                                       double timeout_s) {
    int in_pipe[2], out_pipe[2], err_pipe[2];
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0 || pipe(err_pipe) != 0)
        throw TargetError("failed to create pipes for target command");

    pid_t pid = fork();
    if (pid < 0) throw TargetError("failed to fork target command");
    if (pid == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        close(in_pipe[0]); close(in_pipe[1]);
        close(out_pipe[0]); close(out_pipe[1]);
        close(err_pipe[0]); close(err_pipe[1]);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }

    close(in_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[1]);

    // requests are small; the pipe buffer absorbs them without blocking
    std::size_t written = 0;
    while (written < input.size()) {
        ssize_t w = write(in_pipe[1], input.data() + written, input.size() - written);
        if (w <= 0) break;  // child may exit without reading
        written += static_cast<std::size_t>(w);
    }
    close(in_pipe[1]);

    SubprocessResult result;
    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s);
    struct pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
    bool open_out = true, open_err = true;
    char buf[4096];
    while (open_out || open_err) {
        const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                                   deadline - std::chrono::steady_clock::now())
                                   .count();
        if (remaining <= 0) {
            result.timed_out = true;
            kill(pid, SIGKILL);
            break;
        }
        fds[0].events = open_out ? POLLIN : 0;
        fds[1].events = open_err ? POLLIN : 0;
        int rc = poll(fds, 2, static_cast<int>(std::min<long long>(remaining, 250)));
        if (rc < 0) break;
        for (int i = 0; i < 2; ++i) {
            if (fds[i].revents & (POLLIN | POLLHUP)) {
                ssize_t r = read(fds[i].fd, buf, sizeof buf);
                if (r > 0) {
                    (i == 0 ? result.out : result.err).append(buf, static_cast<std::size_t>(r));
                } else {
                    (i == 0 ? open_out : open_err) = false;
                }
            }
        }
    }
    close(out_pipe[0]);
    close(err_pipe[0]);

    int status = 0;
    waitpid(pid, &status, 0);
    if (!result.timed_out)
        result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

//! Adapter for tuning a real system through an external command. Each
//! evaluation pipes {"config": {...}, "budget": {...}} to the command's
//! stdin and expects a single JSON line {"metric": float,
//! "fidelity": "full"|"partial"} on stdout.
class ExternalCommandTarget final : public Target {
public:
    ExternalCommandTarget(std::string command, BenchMode mode, MetricDirection direction,
                          double timeout_s = 600.0)
        : command_(std::move(command)), mode_(mode), direction_(direction),
          timeout_s_(timeout_s) {}

    BenchMode mode() const override { return mode_; }
    MetricDirection direction() const override { return direction_; }
    bool phase_based() const override { return true; }

    Measurement measure_phase(const Configuration& config, const BenchPolicy& policy,
                              BenchPhase phase, Rng&) override {
        nlohmann::json request{
            {"config", to_json(config)},
            {"budget",
             {{"mode", to_string(policy.mode)},
              {"t_cut", policy.t_cut},
              {"t_max", policy.t_max},
              {"subset_fraction", policy.subset_fraction},
              {"phase", phase == BenchPhase::Probe ? "probe" : "full"}}}};
        auto res = run_subprocess(command_, request.dump() + "\n", timeout_s_);
        if (res.timed_out)
            throw TargetError("target timed out after " + std::to_string(timeout_s_) + " s");
        if (res.exit_code != 0)
            throw TargetError("target failed: exit code " + std::to_string(res.exit_code) +
                              (res.err.empty() ? "" : (", stderr: " + res.err)));
        nlohmann::json reply;
        try {
            const auto eol = res.out.find('\n');
            reply = nlohmann::json::parse(
                eol == std::string::npos ? res.out : res.out.substr(0, eol));
            Measurement m;
            m.raw_metric = reply.at("metric").get<double>();
            m.fidelity = fidelity_from_string(reply.at("fidelity").get<std::string>());
            m.cost = mode_ == BenchMode::ThroughputWindow
                         ? (phase == BenchPhase::Probe ? policy.t_cut : policy.t_max)
                         : m.raw_metric;
            return m;
        } catch (const nlohmann::json::exception&) {
            throw TargetError("target produced malformed output: " + res.out);
        }
    }

private:
    std::string command_;
    BenchMode mode_;
    MetricDirection direction_;
    double timeout_s_;
};

}  // namespace dotune
