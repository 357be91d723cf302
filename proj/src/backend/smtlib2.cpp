/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "backend/smtlib2.hpp"

#include "backend/session.hpp"
#include "logic/ops.hpp"
#include "util/sexpr.hpp"

#include <cassert>
#include <cctype>
#include <chrono>
#include <csignal>
#include <cstring>
#include <sstream>

#include <fcntl.h>
#include <poll.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

namespace cyclomc {

namespace smt2 {

namespace {

bool simple_symbol(const std::string & s) {
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || std::strchr("~!@$%^&*_-+=<>.?/", c))) {
            return false;
        }
    }
    return true;
}

std::string rational_literal(const Rational & r, bool as_real) {
    bool neg = r.is_negative();
    Rational a = neg ? -r : r;
    std::string inner;
    if (a.is_integer()) {
        inner = a.numerator().get_str();
        if (as_real) inner += ".0";
    } else {
        inner = "(/ " + a.numerator().get_str() + " " + a.denominator().get_str() + ")";
    }
    return neg ? "(- " + inner + ")" : inner;
}

bool atom_is_real(const Atom & a) {
    for (auto const & [v, c] : a.lhs.coeffs())
        if (v.sort == Sort::Real) return true;
    return !a.bound.is_integer();
}

std::string render_term(const Atom & a) {
    bool real_ctx = atom_is_real(a);
    std::vector<std::string> parts;
    for (auto const & [v, c] : a.lhs.coeffs()) {
        std::string vs = symbol(v);
        if (real_ctx && v.sort == Sort::Int) vs = "(to_real " + vs + ")";
        if (c == Rational(1)) {
            parts.push_back(vs);
        } else {
            parts.push_back("(* " + rational_literal(c, real_ctx) + " " + vs + ")");
        }
    }
    if (parts.empty()) return rational_literal(Rational(0), real_ctx);
    if (parts.size() == 1) return parts[0];
    std::string out = "(+";
    for (auto const & p : parts) out += " " + p;
    return out + ")";
}

std::string render_atom(const Atom & a) {
    bool real_ctx = atom_is_real(a);
    std::string t = render_term(a);
    std::string b = rational_literal(a.bound, real_ctx);
    switch (a.rel) {
        case Rel::Eq: return "(= " + t + " " + b + ")";
        case Rel::Ne: return "(not (= " + t + " " + b + "))";
        case Rel::Le: return "(<= " + t + " " + b + ")";
        case Rel::Lt: return "(< " + t + " " + b + ")";
        case Rel::Ge: return "(>= " + t + " " + b + ")";
        case Rel::Gt: return "(> " + t + " " + b + ")";
    }
    throw std::logic_error("bad Rel");
}

Rational value_from_sexpr(const Sexpr & e) {
    if (e.is_symbol()) { return Rational::from_string(e.symbol); }
    if (e.size() == 2 && e[0].is_symbol("-")) { return -value_from_sexpr(e[1]); }
    if (e.size() == 3 && e[0].is_symbol("/")) {
        return value_from_sexpr(e[1]) / value_from_sexpr(e[2]);
    }
    if (e.size() == 2 && e[0].is_symbol("to_real")) { return value_from_sexpr(e[1]); }
    throw TransportError("unparseable model value: " + e.str());
}

} // namespace

std::string symbol(const Var & v) {
    std::string s = v.str();
    return simple_symbol(s) ? s : "|" + s + "|";
}

std::string render(const Formula & f) {
    switch (f->kind) {
        case Conn::True: return "true";
        case Conn::False: return "false";
        case Conn::AtomF: return render_atom(*f->atom);
        case Conn::Not: return "(not " + render(f->args[0]) + ")";
        case Conn::And:
        case Conn::Or: {
            std::string out = f->kind == Conn::And ? "(and" : "(or";
            for (auto const & a : f->args) out += " " + render(a);
            return out + ")";
        }
        case Conn::Implies: return "(=> " + render(f->args[0]) + " " + render(f->args[1]) + ")";
        case Conn::Exists:
        case Conn::Forall: {
            std::string out = f->kind == Conn::Exists ? "(exists (" : "(forall (";
            bool first = true;
            for (auto const & v : f->binders) {
                if (!first) out += " ";
                out += "(" + symbol(v) + " " + to_string(v.sort) + ")";
                first = false;
            }
            return out + ") " + render(f->args[0]) + ")";
        }
    }
    throw std::logic_error("bad Conn");
}

std::string logic_for(const Formula & f) {
    bool has_int = false, has_real = false;
    for (auto const & v : free_vars(f)) {
        (v.sort == Sort::Int ? has_int : has_real) = true;
    }
    if (has_int && has_real) return "QF_LIRA";
    if (has_real) return "QF_LRA";
    return "QF_LIA";
}

std::string query_script(const Formula & f) {
    std::ostringstream os;
    os << "(reset)\n";
    os << "(set-logic " << logic_for(f) << ")\n";
    for (auto const & v : free_vars(f)) {
        os << "(declare-const " << symbol(v) << " " << to_string(v.sort) << ")\n";
    }
    os << "(assert " << render(f) << ")\n";
    os << "(check-sat)\n";
    return os.str();
}

Model parse_model(const std::string & reply, const std::vector<Var> & vars)
{
    Sexpr top = parse_sexpr(reply);
    Model m;
    auto consume_define = [&](const Sexpr & d) {
        if (!d.is_list() || d.size() < 5 || !d[0].is_symbol("define-fun")) return;
        const std::string & name = d[1].symbol;
        for (auto const & v : vars) {
            if (v.str() == name) {
                m.set(v, value_from_sexpr(d[4]));
                return;
            }
        }
    };
    size_t start = 0;
    if (top.size() > 0 && top[0].is_symbol("model")) start = 1;
    for (size_t i = start; i < top.size(); ++i) consume_define(top[i]);
    return m;
}

} // namespace smt2

namespace {

/// Bidirectional pipe to a solver process spawned via /bin/sh so that the
/// configured command may carry arguments (e.g. "z3 -in").
class SolverProcess {
public:
    explicit SolverProcess(const std::string & command) {
        int to_child[2], from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0) {
            throw TransportError("pipe() failed for solver process");
        }
        pid_ = fork();
        if (pid_ < 0) { throw TransportError("fork() failed for solver process"); }
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            execl("/bin/sh", "sh", "-c", command.c_str(), (char *)nullptr);
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        in_fd_ = to_child[1];
        out_fd_ = from_child[0];
        int flags = fcntl(out_fd_, F_GETFL, 0);
        fcntl(out_fd_, F_SETFL, flags | O_NONBLOCK);
    }

    ~SolverProcess() {
        if (in_fd_ >= 0) close(in_fd_);
        if (out_fd_ >= 0) close(out_fd_);
        if (pid_ > 0) {
            kill(pid_, SIGKILL);
            int status = 0;
            waitpid(pid_, &status, 0);
        }
    }

    void write_all(const std::string & data) {
        size_t off = 0;
        while (off < data.size()) {
            ssize_t n = ::write(in_fd_, data.data() + off, data.size() - off);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw TransportError(std::string("write to solver failed: ") + std::strerror(errno));
            }
            off += static_cast<size_t>(n);
        }
    }

    /// Reads one line (without the newline). Returns false on deadline.
    bool read_line(std::string & out, long timeout_ms) {
        out.clear();
        auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
        while (true) {
            auto nl = buffer_.find('\n');
            if (nl != std::string::npos) {
                out = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                if (!out.empty() && out.back() == '\r') out.pop_back();
                if (out.empty()) continue;
                return true;
            }
            if (!fill(timeout_ms > 0 ? deadline : std::chrono::steady_clock::time_point::max()))
                return false;
        }
    }

    /// Reads one balanced s-expression (for get-model replies).
    bool read_sexpr(std::string & out, long timeout_ms) {
        out.clear();
        auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
        int depth = 0;
        bool started = false;
        size_t pos = 0;
        while (true) {
            for (; pos < buffer_.size(); ++pos) {
                char c = buffer_[pos];
                if (c == '(') {
                    ++depth;
                    started = true;
                } else if (c == ')') {
                    --depth;
                }
                if (started && depth == 0) {
                    out = buffer_.substr(0, pos + 1);
                    buffer_.erase(0, pos + 1);
                    return true;
                }
            }
            if (!fill(timeout_ms > 0 ? deadline : std::chrono::steady_clock::time_point::max()))
                return false;
        }
    }

private:
    bool fill(std::chrono::steady_clock::time_point deadline) {
        struct pollfd pfd {out_fd_, POLLIN, 0};
        long wait_ms = 3600'000;
        if (deadline != std::chrono::steady_clock::time_point::max()) {
            auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                            deadline - std::chrono::steady_clock::now())
                            .count();
            if (left <= 0) return false;
            wait_ms = left;
        }
        int pr = poll(&pfd, 1, static_cast<int>(wait_ms));
        if (pr == 0) return false;
        if (pr < 0) {
            if (errno == EINTR) return true;
            throw TransportError(std::string("poll on solver failed: ") + std::strerror(errno));
        }
        char buf[4096];
        ssize_t n = ::read(out_fd_, buf, sizeof buf);
        if (n == 0) { throw TransportError("solver process closed its output"); }
        if (n < 0) {
            if (errno == EAGAIN || errno == EINTR) return true;
            throw TransportError(std::string("read from solver failed: ") + std::strerror(errno));
        }
        buffer_.append(buf, static_cast<size_t>(n));
        return true;
    }

    pid_t pid_ = -1;
    int in_fd_ = -1;
    int out_fd_ = -1;
    std::string buffer_;
};

class Smtlib2Session final : public SolverSession {
public:
    Smtlib2Session(std::string command, long timeout_ms)
        : command_(std::move(command)), timeout_ms_(timeout_ms), process_(command_) {}

    SatResult check_sat(const Formula & f) override {
        auto t0 = std::chrono::steady_clock::now();
        SatResult r = check_sat_impl(f);
        stats_.wall_seconds +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
    }

private:
    SatResult check_sat_impl(const Formula & f) {
        ++stats_.sat_queries;
        if (!is_quantifier_free(f)) {
            throw std::invalid_argument("smtlib2 session requires a quantifier-free formula");
        }
        process_.write_all(smt2::query_script(f));
        std::string line;
        if (!process_.read_line(line, timeout_ms_)) {
            return SatResult::unknown("solver timeout after " + std::to_string(timeout_ms_) + "ms");
        }
        if (line.rfind("(error", 0) == 0) { throw TransportError("solver error reply: " + line); }
        if (line == "unsat") return SatResult::unsat();
        if (line == "unknown") return SatResult::unknown("solver reported unknown");
        if (line != "sat") { throw TransportError("unexpected solver reply: " + line); }

        VarSet fvs = free_vars(f);
        std::vector<Var> vars(fvs.begin(), fvs.end());
        process_.write_all("(get-model)\n");
        std::string reply;
        if (!process_.read_sexpr(reply, timeout_ms_)) {
            return SatResult::unknown("solver timeout while reading model");
        }
        Model m = smt2::parse_model(reply, vars);
        for (auto const & v : vars) {
            if (!m.has(v)) m.set(v, Rational(0)); // value left unconstrained by the solver
        }
        assert(evaluate(f, m));
        return SatResult::sat(std::move(m));
    }

    std::string command_;
    long timeout_ms_;
    SolverProcess process_;
};

} // namespace

std::unique_ptr<SolverSession> make_smtlib2_session(const std::string & solver_path, long timeout_ms) {
    return std::make_unique<Smtlib2Session>(solver_path, timeout_ms);
}

} // namespace cyclomc
