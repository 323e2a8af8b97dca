// Copyright 2026 The mpsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// OpenQASM 2.0 subset reader. The accepted grammar is documented in
// docs/qasm_grammar.md.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mpsim/circuit.hpp"
#include "mpsim/errors.hpp"
#include "mpsim/gate.hpp"

namespace mpsim {
namespace qasm {

enum class TokenKind { identifier, number, string, symbol, end };

struct Token {
    TokenKind kind = TokenKind::end;
    std::string text;
    double number = 0.0;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> tokenize() {
        std::vector<Token> out;
        while (true) {
            skip_space_and_comments();
            Token t;
            t.line = line_;
            t.column = col_;
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            const char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                t.kind = TokenKind::identifier;
                while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                    t.text += advance();
                }
            } else if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && pos_ + 1 < src_.size() &&
                                                                     std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
                t.kind = TokenKind::number;
                lex_number(t);
            } else if (c == '"') {
                t.kind = TokenKind::string;
                advance();
                while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') t.text += advance();
                if (pos_ >= src_.size() || src_[pos_] != '"') throw ParseError("unterminated string", t.line, t.column);
                advance();
            } else {
                t.kind = TokenKind::symbol;
                if ((c == '-' && peek(1) == '>') || (c == '=' && peek(1) == '=')) {
                    t.text += advance();
                    t.text += advance();
                } else if (std::string_view(";,()[]{}+-*/^<>=").find(c) != std::string_view::npos) {
                    t.text += advance();
                } else {
                    throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.column);
                }
            }
            out.push_back(std::move(t));
        }
    }

private:
    char peek(std::size_t ahead) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

    char advance() {
        const char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (c == '/' && peek(1) == '*') {
                advance();
                advance();
                while (pos_ < src_.size() && !(src_[pos_] == '*' && peek(1) == '/')) advance();
                if (pos_ < src_.size()) {
                    advance();
                    advance();
                }
            } else {
                return;
            }
        }
    }

    void lex_number(Token& t) {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        };
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            advance();
            digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            advance();
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                throw ParseError("malformed number exponent", t.line, t.column);
            }
            digits();
        }
        t.text = std::string(src_.substr(start, pos_ - start));
        const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
        if (res.ec != std::errc{}) throw ParseError("malformed number '" + t.text + "'", t.line, t.column);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

/// Parameter expression tree.
struct Expr {
    enum class Kind { number, param, negate, add, sub, mul, div, pow, call };
    Kind kind = Kind::number;
    double value = 0.0;
    std::string name;
    std::vector<Expr> args;
    std::size_t line = 0;
    std::size_t column = 0;

    double eval(const std::map<std::string, double>& env) const {
        switch (kind) {
        case Kind::number: return value;
        case Kind::param: {
            auto it = env.find(name);
            if (it == env.end()) throw ParseError("unknown parameter '" + name + "'", line, column);
            return it->second;
        }
        case Kind::negate: return -args[0].eval(env);
        case Kind::add: return args[0].eval(env) + args[1].eval(env);
        case Kind::sub: return args[0].eval(env) - args[1].eval(env);
        case Kind::mul: return args[0].eval(env) * args[1].eval(env);
        case Kind::div: return args[0].eval(env) / args[1].eval(env);
        case Kind::pow: return std::pow(args[0].eval(env), args[1].eval(env));
        case Kind::call: {
            const double x = args[0].eval(env);
            if (name == "sin") return std::sin(x);
            if (name == "cos") return std::cos(x);
            if (name == "tan") return std::tan(x);
            if (name == "exp") return std::exp(x);
            if (name == "ln") return std::log(x);
            if (name == "sqrt") return std::sqrt(x);
            throw ParseError("unknown function '" + name + "'", line, column);
        }
        }
        return 0.0;
    }
};

/// One statement inside a gate body: name(params) a, b, ...
struct GateCall {
    std::string name;
    std::vector<Expr> params;
    std::vector<std::string> args;
    std::size_t line = 0;
    std::size_t column = 0;
};

struct GateDefinition {
    std::vector<std::string> params;
    std::vector<std::string> args;
    std::vector<GateCall> body;
};

/// Elemental gate sink used during expansion.
using Emit = std::function<void(Gate)>;

/// Built-in gates. Three-qubit library gates expand to one/two-qubit gates.
struct Builtin {
    std::size_t num_params;
    std::size_t num_qubits;
    std::function<void(const std::vector<double>&, const std::vector<std::size_t>&, const Emit&)> expand;
};

inline const std::map<std::string, Builtin>& builtins() {
    using M = Eigen::MatrixXcd;
    static const std::map<std::string, Builtin> table = [] {
        std::map<std::string, Builtin> t;
        auto fixed1 = [&t](const std::string& name, M m) {
            t[name] = {0, 1, [name, m](const auto&, const auto& q, const Emit& e) { e(make_gate(name, {q[0]}, m)); }};
        };
        auto fixed2 = [&t](const std::string& name, M m) {
            t[name] = {0, 2, [name, m](const auto&, const auto& q, const Emit& e) { e(make_gate(name, {q[0], q[1]}, m)); }};
        };
        fixed1("id", gates::identity2());
        fixed1("x", gates::x());
        fixed1("y", gates::y());
        fixed1("z", gates::z());
        fixed1("h", gates::h());
        fixed1("s", gates::s());
        fixed1("sdg", gates::sdg());
        fixed1("t", gates::t());
        fixed1("tdg", gates::tdg());
        fixed1("sx", gates::sx());
        fixed2("cx", gates::cx());
        fixed2("CX", gates::cx());
        fixed2("cy", gates::cy());
        fixed2("cz", gates::cz());
        fixed2("ch", gates::ch());
        fixed2("swap", gates::swap());

        auto u3 = [](const std::string& name) {
            return Builtin{3, 1, [name](const auto& p, const auto& q, const Emit& e) {
                               e(make_gate(name, {q[0]}, gates::u3(p[0], p[1], p[2])));
                           }};
        };
        t["u3"] = u3("u3");
        t["u"] = u3("u");
        t["U"] = u3("U");
        t["u2"] = {2, 1, [](const auto& p, const auto& q, const Emit& e) { e(make_gate("u2", {q[0]}, gates::u2(p[0], p[1]))); }};
        t["u1"] = {1, 1, [](const auto& p, const auto& q, const Emit& e) { e(make_gate("u1", {q[0]}, gates::phase(p[0]))); }};
        t["p"] = {1, 1, [](const auto& p, const auto& q, const Emit& e) { e(make_gate("p", {q[0]}, gates::phase(p[0]))); }};
        t["rx"] = {1, 1, [](const auto& p, const auto& q, const Emit& e) { e(make_gate("rx", {q[0]}, gates::rx(p[0]))); }};
        t["ry"] = {1, 1, [](const auto& p, const auto& q, const Emit& e) { e(make_gate("ry", {q[0]}, gates::ry(p[0]))); }};
        t["rz"] = {1, 1, [](const auto& p, const auto& q, const Emit& e) { e(make_gate("rz", {q[0]}, gates::rz(p[0]))); }};
        t["cu1"] = {1, 2, [](const auto& p, const auto& q, const Emit& e) { e(make_gate("cu1", {q[0], q[1]}, gates::cphase(p[0]))); }};
        t["cp"] = {1, 2, [](const auto& p, const auto& q, const Emit& e) { e(make_gate("cp", {q[0], q[1]}, gates::cphase(p[0]))); }};
        t["crz"] = {1, 2, [](const auto& p, const auto& q, const Emit& e) { e(make_gate("crz", {q[0], q[1]}, gates::crz(p[0]))); }};
        t["cu3"] = {3, 2, [](const auto& p, const auto& q, const Emit& e) {
                        e(make_gate("cu3", {q[0], q[1]}, gates::cu3(p[0], p[1], p[2])));
                    }};
        t["rzz"] = {1, 2, [](const auto& p, const auto& q, const Emit& e) { e(make_gate("rzz", {q[0], q[1]}, gates::rzz(p[0]))); }};

        // Standard 6-CNOT Toffoli decomposition (qelib1.inc).
        auto toffoli = [](std::size_t a, std::size_t b, std::size_t c, const Emit& e) {
            e(make_gate("h", {c}, gates::h()));
            e(make_gate("cx", {b, c}, gates::cx()));
            e(make_gate("tdg", {c}, gates::tdg()));
            e(make_gate("cx", {a, c}, gates::cx()));
            e(make_gate("t", {c}, gates::t()));
            e(make_gate("cx", {b, c}, gates::cx()));
            e(make_gate("tdg", {c}, gates::tdg()));
            e(make_gate("cx", {a, c}, gates::cx()));
            e(make_gate("t", {b}, gates::t()));
            e(make_gate("t", {c}, gates::t()));
            e(make_gate("h", {c}, gates::h()));
            e(make_gate("cx", {a, b}, gates::cx()));
            e(make_gate("t", {a}, gates::t()));
            e(make_gate("tdg", {b}, gates::tdg()));
            e(make_gate("cx", {a, b}, gates::cx()));
        };
        t["ccx"] = {0, 3, [toffoli](const auto&, const auto& q, const Emit& e) { toffoli(q[0], q[1], q[2], e); }};
        t["cswap"] = {0, 3, [toffoli](const auto&, const auto& q, const Emit& e) {
                          e(make_gate("cx", {q[2], q[1]}, gates::cx()));
                          toffoli(q[0], q[1], q[2], e);
                          e(make_gate("cx", {q[2], q[1]}, gates::cx()));
                      }};
        return t;
    }();
    return table;
}

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(Lexer(text).tokenize()) {}

    Circuit parse() {
        if (is_ident("OPENQASM")) {
            next();
            const Token& v = expect_kind(TokenKind::number, "version number");
            if (v.text != "2.0" && v.text != "2") {
                throw UnsupportedFeatureError("OpenQASM version " + v.text + " (only 2.0 is accepted)", v.line);
            }
            expect(";");
        }
        while (peek().kind != TokenKind::end) statement();
        Circuit c;
        c.num_qubits = num_qubits_;
        c.gates = std::move(gates_);
        if (c.num_qubits == 0) throw ParseError("no qreg declared", 1, 1);
        return c;
    }

private:
    struct Register {
        std::size_t offset = 0;
        std::size_t size = 0;
    };

    /// A statement argument: a whole register or one element of it.
    struct Operand {
        std::string reg;
        std::optional<std::size_t> index;
        std::size_t line = 0;
        std::size_t column = 0;
    };

    const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }
    const Token& next() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

    bool is_symbol(std::string_view s, std::size_t ahead = 0) const {
        return peek(ahead).kind == TokenKind::symbol && peek(ahead).text == s;
    }
    bool is_ident(std::string_view s) const { return peek().kind == TokenKind::identifier && peek().text == s; }

    [[noreturn]] void fail(const std::string& msg, const Token& t) const { throw ParseError(msg, t.line, t.column); }

    const Token& expect(std::string_view sym) {
        if (!is_symbol(sym)) fail("expected '" + std::string(sym) + "'" + found(), peek());
        return next();
    }

    const Token& expect_kind(TokenKind kind, const std::string& what) {
        if (peek().kind != kind) fail("expected " + what + found(), peek());
        return next();
    }

    std::string found() const {
        const Token& t = peek();
        return t.kind == TokenKind::end ? " but reached end of input" : " but found '" + t.text + "'";
    }

    std::size_t expect_index() {
        const Token& t = expect_kind(TokenKind::number, "integer index");
        if (t.text.find_first_not_of("0123456789") != std::string::npos) fail("expected integer index", t);
        return static_cast<std::size_t>(t.number);
    }

    void statement() {
        const Token& t = peek();
        if (t.kind != TokenKind::identifier) fail("expected a statement" + found(), t);
        const std::string& kw = t.text;
        if (kw == "include") return include_stmt();
        if (kw == "qreg" || kw == "creg") return register_decl();
        if (kw == "gate") return gate_decl();
        if (kw == "opaque") throw UnsupportedFeatureError("opaque gate declaration", t.line);
        if (kw == "measure") return measure_stmt();
        if (kw == "reset") throw UnsupportedFeatureError("reset", t.line);
        if (kw == "if") throw UnsupportedFeatureError("classical control (if)", t.line);
        if (kw == "barrier") {
            next();
            operand_list();
            expect(";");
            return;
        }
        gate_stmt();
    }

    void include_stmt() {
        const Token& kw = next();
        const Token& file = expect_kind(TokenKind::string, "include file name");
        if (file.text != "qelib1.inc") throw UnsupportedFeatureError("include of '" + file.text + "'", kw.line);
        expect(";");
    }

    void register_decl() {
        const bool quantum = next().text == "qreg";
        const Token& name = expect_kind(TokenKind::identifier, "register name");
        expect("[");
        const std::size_t size = expect_index();
        expect("]");
        expect(";");
        if (qregs_.count(name.text) || cregs_.count(name.text)) fail("register '" + name.text + "' redeclared", name);
        if (quantum) {
            if (size == 0) fail("quantum register of size 0", name);
            qregs_[name.text] = {num_qubits_, size};
            num_qubits_ += size;
            measured_line_.resize(num_qubits_, 0);
        } else {
            cregs_[name.text] = size;
        }
    }

    std::vector<std::string> identifier_list() {
        std::vector<std::string> ids;
        ids.push_back(expect_kind(TokenKind::identifier, "identifier").text);
        while (is_symbol(",")) {
            next();
            ids.push_back(expect_kind(TokenKind::identifier, "identifier").text);
        }
        return ids;
    }

    void gate_decl() {
        next();
        const Token& name = expect_kind(TokenKind::identifier, "gate name");
        if (definitions_.count(name.text) || builtins().count(name.text)) fail("gate '" + name.text + "' redefined", name);
        GateDefinition def;
        if (is_symbol("(")) {
            next();
            if (!is_symbol(")")) def.params = identifier_list();
            expect(")");
        }
        def.args = identifier_list();
        expect("{");
        while (!is_symbol("}")) {
            const Token& head = peek();
            if (head.kind != TokenKind::identifier) fail("expected gate call in gate body" + found(), head);
            if (head.text == "barrier") {
                next();
                identifier_list();
                expect(";");
                continue;
            }
            GateCall call;
            call.name = next().text;
            call.line = head.line;
            call.column = head.column;
            if (is_symbol("(")) {
                next();
                if (!is_symbol(")")) call.params = expression_list();
                expect(")");
            }
            call.args = identifier_list();
            expect(";");
            for (const auto& a : call.args) {
                if (std::find(def.args.begin(), def.args.end(), a) == def.args.end()) {
                    throw ParseError("gate body uses undeclared qubit '" + a + "'", call.line, call.column);
                }
            }
            def.body.push_back(std::move(call));
        }
        expect("}");
        definitions_[name.text] = std::move(def);
    }

    std::vector<Operand> operand_list() {
        std::vector<Operand> ops;
        ops.push_back(operand());
        while (is_symbol(",")) {
            next();
            ops.push_back(operand());
        }
        return ops;
    }

    Operand operand() {
        const Token& name = expect_kind(TokenKind::identifier, "register");
        Operand op{name.text, std::nullopt, name.line, name.column};
        if (is_symbol("[")) {
            next();
            op.index = expect_index();
            expect("]");
        }
        return op;
    }

    std::vector<std::size_t> qubits_of(const Operand& op) const {
        auto it = qregs_.find(op.reg);
        if (it == qregs_.end()) throw ParseError("unknown quantum register '" + op.reg + "'", op.line, op.column);
        const Register& r = it->second;
        if (op.index) {
            if (*op.index >= r.size) {
                throw ParseError("index " + std::to_string(*op.index) + " out of range for '" + op.reg + "'", op.line,
                                 op.column);
            }
            return {r.offset + *op.index};
        }
        std::vector<std::size_t> all(r.size);
        for (std::size_t k = 0; k < r.size; ++k) all[k] = r.offset + k;
        return all;
    }

    /// Expands register broadcasting: whole registers iterate in lockstep.
    std::vector<std::vector<std::size_t>> broadcast(const std::vector<Operand>& ops) const {
        std::vector<std::vector<std::size_t>> expanded;
        std::size_t width = 1;
        for (const auto& op : ops) {
            expanded.push_back(qubits_of(op));
            if (!op.index) {
                if (width != 1 && expanded.back().size() != width) {
                    throw ParseError("registers of different sizes in one statement", op.line, op.column);
                }
                width = expanded.back().size();
            }
        }
        std::vector<std::vector<std::size_t>> rows(width);
        for (std::size_t k = 0; k < width; ++k) {
            for (std::size_t a = 0; a < ops.size(); ++a) rows[k].push_back(ops[a].index ? expanded[a][0] : expanded[a][k]);
        }
        return rows;
    }

    void measure_stmt() {
        const Token& kw = next();
        const Operand q = operand();
        expect("->");
        const Token& creg = expect_kind(TokenKind::identifier, "classical register");
        if (!cregs_.count(creg.text)) fail("unknown classical register '" + creg.text + "'", creg);
        if (is_symbol("[")) {
            next();
            expect_index();
            expect("]");
        }
        expect(";");
        for (std::size_t qubit : qubits_of(q)) measured_line_[qubit] = kw.line;
    }

    void gate_stmt() {
        const Token& name = next();
        std::vector<double> params;
        if (is_symbol("(")) {
            next();
            if (!is_symbol(")")) {
                for (const auto& e : expression_list()) params.push_back(e.eval({}));
            }
            expect(")");
        }
        const auto ops = operand_list();
        expect(";");
        for (const auto& qubits : broadcast(ops)) apply(name.text, params, qubits, name.line, name.column, 0);
    }

    void apply(const std::string& name, const std::vector<double>& params, const std::vector<std::size_t>& qubits,
               std::size_t line, std::size_t column, int depth) {
        if (depth > 64) throw ParseError("gate expansion too deep at '" + name + "'", line, column);
        for (std::size_t a = 0; a < qubits.size(); ++a) {
            for (std::size_t b = a + 1; b < qubits.size(); ++b) {
                if (qubits[a] == qubits[b]) throw ParseError("gate '" + name + "' repeats a qubit", line, column);
            }
        }
        if (auto it = definitions_.find(name); it != definitions_.end()) {
            const GateDefinition& def = it->second;
            check_arity(name, def.params.size(), def.args.size(), params, qubits, line, column);
            std::map<std::string, double> env;
            for (std::size_t k = 0; k < params.size(); ++k) env[def.params[k]] = params[k];
            std::map<std::string, std::size_t> wires;
            for (std::size_t k = 0; k < qubits.size(); ++k) wires[def.args[k]] = qubits[k];
            for (const auto& call : def.body) {
                std::vector<double> p;
                for (const auto& e : call.params) p.push_back(e.eval(env));
                std::vector<std::size_t> q;
                for (const auto& a : call.args) q.push_back(wires.at(a));
                apply(call.name, p, q, call.line, call.column, depth + 1);
            }
            return;
        }
        auto bt = builtins().find(name);
        if (bt == builtins().end()) throw ParseError("unknown gate '" + name + "'", line, column);
        check_arity(name, bt->second.num_params, bt->second.num_qubits, params, qubits, line, column);
        bt->second.expand(params, qubits, [&](Gate g) {
            for (std::size_t q : g.qubits) {
                if (measured_line_[q] != 0) {
                    throw UnsupportedFeatureError("mid-circuit measurement (qubit " + std::to_string(q) +
                                                      " measured on line " + std::to_string(measured_line_[q]) +
                                                      " is used again)",
                                                  line);
                }
            }
            gates_.push_back(std::move(g));
        });
    }

    static void check_arity(const std::string& name, std::size_t np, std::size_t nq, const std::vector<double>& params,
                            const std::vector<std::size_t>& qubits, std::size_t line, std::size_t column) {
        if (params.size() != np) {
            throw ParseError("gate '" + name + "' takes " + std::to_string(np) + " parameter(s), got " +
                                 std::to_string(params.size()),
                             line, column);
        }
        if (qubits.size() != nq) {
            throw ParseError("gate '" + name + "' acts on " + std::to_string(nq) + " qubit(s), got " +
                                 std::to_string(qubits.size()),
                             line, column);
        }
    }

    std::vector<Expr> expression_list() {
        std::vector<Expr> out;
        out.push_back(expression());
        while (is_symbol(",")) {
            next();
            out.push_back(expression());
        }
        return out;
    }

    static Expr binary(Expr::Kind k, Expr lhs, Expr rhs, const Token& at) {
        Expr e;
        e.kind = k;
        e.line = at.line;
        e.column = at.column;
        e.args.push_back(std::move(lhs));
        e.args.push_back(std::move(rhs));
        return e;
    }

    Expr expression() {
        Expr lhs = term();
        while (is_symbol("+") || is_symbol("-")) {
            const Token& op = next();
            lhs = binary(op.text == "+" ? Expr::Kind::add : Expr::Kind::sub, std::move(lhs), term(), op);
        }
        return lhs;
    }

    Expr term() {
        Expr lhs = unary();
        while (is_symbol("*") || is_symbol("/")) {
            const Token& op = next();
            lhs = binary(op.text == "*" ? Expr::Kind::mul : Expr::Kind::div, std::move(lhs), unary(), op);
        }
        return lhs;
    }

    Expr unary() {
        if (is_symbol("-")) {
            const Token& op = next();
            Expr e;
            e.kind = Expr::Kind::negate;
            e.line = op.line;
            e.column = op.column;
            e.args.push_back(unary());
            return e;
        }
        if (is_symbol("+")) {
            next();
            return unary();
        }
        Expr base = primary();
        if (is_symbol("^")) {
            const Token& op = next();
            return binary(Expr::Kind::pow, std::move(base), unary(), op);
        }
        return base;
    }

    Expr primary() {
        const Token& t = next();
        Expr e;
        e.line = t.line;
        e.column = t.column;
        if (t.kind == TokenKind::number) {
            e.value = t.number;
            return e;
        }
        if (t.kind == TokenKind::symbol && t.text == "(") {
            Expr inner = expression();
            expect(")");
            return inner;
        }
        if (t.kind == TokenKind::identifier) {
            if (t.text == "pi") {
                e.value = std::numbers::pi;
                return e;
            }
            if (is_symbol("(")) {
                next();
                e.kind = Expr::Kind::call;
                e.name = t.text;
                e.args.push_back(expression());
                expect(")");
                return e;
            }
            e.kind = Expr::Kind::param;
            e.name = t.text;
            return e;
        }
        fail("expected an expression", t);
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::map<std::string, Register> qregs_;
    std::map<std::string, std::size_t> cregs_;
    std::map<std::string, GateDefinition> definitions_;
    std::size_t num_qubits_ = 0;
    std::vector<std::size_t> measured_line_;
    std::vector<Gate> gates_;
};

} // namespace qasm

/// Parses OpenQASM 2.0 source into elemental one- and two-qubit gates.
/// Register qubits are numbered in declaration order: the first declared
/// register's element 0 becomes qubit 0 (the leftmost MPS site).
inline Circuit parse_qasm(std::string_view text) { return qasm::Parser(text).parse(); }

inline Circuit parse_qasm_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    Circuit c = parse_qasm(buf.str());
    c.source = path;
    return c;
}

} // namespace mpsim
