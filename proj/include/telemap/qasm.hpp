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

#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "telemap/circuit.hpp"
#include "telemap/error.hpp"

namespace telemap {

namespace detail {

enum class TokenKind {
    Identifier,
    Integer,
    Real,
    String,
    Symbol, // ; , ( ) [ ] -> == + - * /
    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    int line = 1;
    int column = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string& source) : src_(source) { advance(); }

    const Token& peek() const { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

  private:
    void advance() {
        skip_whitespace_and_comments();
        current_.line = line_;
        current_.column = column_;
        if (pos_ >= src_.size()) {
            current_.kind = TokenKind::End;
            current_.text.clear();
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                    src_[pos_] == '_')) {
                bump();
            }
            current_.kind = TokenKind::Identifier;
            current_.text = src_.substr(start, pos_ - start);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            bool real = false;
            while (pos_ < src_.size()) {
                char d = src_[pos_];
                if (std::isdigit(static_cast<unsigned char>(d))) {
                    bump();
                } else if (d == '.' && !real) {
                    real = true;
                    bump();
                } else if ((d == 'e' || d == 'E') && pos_ + 1 < src_.size()) {
                    char e = src_[pos_ + 1];
                    if (std::isdigit(static_cast<unsigned char>(e)) ||
                        ((e == '+' || e == '-') && pos_ + 2 < src_.size() &&
                         std::isdigit(
                             static_cast<unsigned char>(src_[pos_ + 2])))) {
                        real = true;
                        bump();
                        bump();
                    } else {
                        break;
                    }
                } else {
                    break;
                }
            }
            current_.kind = real ? TokenKind::Real : TokenKind::Integer;
            current_.text = src_.substr(start, pos_ - start);
            return;
        }
        if (c == '"') {
            bump();
            std::size_t start = pos_;
            while (pos_ < src_.size() && src_[pos_] != '"') {
                bump();
            }
            if (pos_ >= src_.size()) {
                throw ParseError("unterminated string literal", current_.line,
                                 current_.column);
            }
            current_.kind = TokenKind::String;
            current_.text = src_.substr(start, pos_ - start);
            bump(); // closing quote
            return;
        }
        if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
            current_.kind = TokenKind::Symbol;
            current_.text = "->";
            bump();
            bump();
            return;
        }
        if (c == '=' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
            current_.kind = TokenKind::Symbol;
            current_.text = "==";
            bump();
            bump();
            return;
        }
        static const std::string singles = ";,()[]+-*/";
        if (singles.find(c) != std::string::npos) {
            current_.kind = TokenKind::Symbol;
            current_.text = std::string(1, c);
            bump();
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'",
                         line_, column_);
    }

    void skip_whitespace_and_comments() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                bump();
            } else if (c == '/' && pos_ + 1 < src_.size() &&
                       src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') {
                    bump();
                }
            } else {
                break;
            }
        }
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
    Token current_;
};

class Parser {
  public:
    explicit Parser(const std::string& source) : lexer_(source) {}

    Circuit parse() {
        expect_identifier("OPENQASM");
        Token version = expect(TokenKind::Real, "version number");
        if (version.text != "2.0") {
            throw ParseError("only OPENQASM 2.0 is supported", version.line,
                             version.column);
        }
        expect_symbol(";");
        while (lexer_.peek().kind != TokenKind::End) {
            statement();
        }
        if (!saw_qreg_) {
            throw ParseError("program declares no qreg", 1, 1);
        }
        return std::move(circuit_);
    }

  private:
    void statement() {
        Token t = lexer_.peek();
        if (t.kind != TokenKind::Identifier) {
            throw ParseError("expected a statement", t.line, t.column);
        }
        if (t.text == "include") {
            lexer_.next();
            Token file = expect(TokenKind::String, "include file name");
            if (file.text != "qelib1.inc") {
                throw ParseError("only include \"qelib1.inc\" is supported",
                                 file.line, file.column);
            }
            expect_symbol(";");
            return;
        }
        if (t.text == "qreg") {
            lexer_.next();
            Token name = expect(TokenKind::Identifier, "register name");
            if (saw_qreg_) {
                throw ParseError("multiple qreg declarations", name.line,
                                 name.column);
            }
            circuit_.qreg_name = name.text;
            expect_symbol("[");
            circuit_.qubit_count = expect_integer();
            expect_symbol("]");
            expect_symbol(";");
            if (circuit_.qubit_count <= 0) {
                throw ParseError("qreg size must be positive", name.line,
                                 name.column);
            }
            saw_qreg_ = true;
            return;
        }
        if (t.text == "creg") {
            lexer_.next();
            Token name = expect(TokenKind::Identifier, "register name");
            if (circuit_.has_creg_named(name.text)) {
                throw ParseError("duplicate creg '" + name.text + "'",
                                 name.line, name.column);
            }
            expect_symbol("[");
            int size = expect_integer();
            expect_symbol("]");
            expect_symbol(";");
            if (size <= 0) {
                throw ParseError("creg size must be positive", name.line,
                                 name.column);
            }
            circuit_.add_creg(name.text, size);
            return;
        }
        if (t.text == "opaque" || t.text == "gate") {
            throw ParseError("'" + t.text + "' definitions are not supported",
                             t.line, t.column);
        }
        if (t.text == "if") {
            lexer_.next();
            expect_symbol("(");
            Token reg = expect(TokenKind::Identifier, "classical register");
            int creg = creg_index(reg);
            expect_symbol("==");
            long long value = expect_integer();
            expect_symbol(")");
            Token inner = lexer_.peek();
            Gate g = gate_statement();
            if (g.kind == GateKind::Measure || g.kind == GateKind::Barrier) {
                throw ParseError("a classical condition may not decorate '" +
                                     std::string(gate_name(g.kind)) + "'",
                                 inner.line, inner.column);
            }
            g.cond.creg = creg;
            g.cond.value = value;
            circuit_.gates.push_back(std::move(g));
            return;
        }
        circuit_.gates.push_back(gate_statement());
    }

    Gate gate_statement() {
        Token name = expect(TokenKind::Identifier, "gate name");
        Gate g;
        if (name.text == "measure") {
            g.kind = GateKind::Measure;
            g.q0 = qubit_operand();
            expect_symbol("->");
            g.cbit = classical_operand();
            expect_symbol(";");
            return g;
        }
        if (name.text == "reset") {
            g.kind = GateKind::Reset;
            g.q0 = qubit_operand();
            expect_symbol(";");
            return g;
        }
        if (name.text == "barrier") {
            g.kind = GateKind::Barrier;
            // `barrier q;` fences everything; an explicit operand list is
            // kept for round-tripping but fences all qubits just the same.
            Token reg = expect(TokenKind::Identifier, "register name");
            check_qreg_name(reg);
            if (peek_symbol("[")) {
                g.barrier_qubits.push_back(finish_indexed_qubit(reg));
                while (peek_symbol(",")) {
                    lexer_.next();
                    g.barrier_qubits.push_back(qubit_operand());
                }
            }
            expect_symbol(";");
            return g;
        }
        std::optional<GateKind> kind = lookup_gate(name.text);
        if (!kind) {
            throw ParseError("unsupported gate '" + name.text + "'", name.line,
                             name.column);
        }
        g.kind = *kind;
        int params = gate_param_count(g.kind);
        if (params > 0) {
            expect_symbol("(");
            for (int i = 0; i < params; ++i) {
                if (i > 0) {
                    expect_symbol(",");
                }
                g.params.push_back(expression());
            }
            expect_symbol(")");
        }
        g.q0 = qubit_operand();
        if (g.kind == GateKind::CX) {
            expect_symbol(",");
            g.q1 = qubit_operand();
            if (g.q0 == g.q1) {
                throw ParseError("cx requires two distinct qubits", name.line,
                                 name.column);
            }
        }
        expect_symbol(";");
        return g;
    }

    static std::optional<GateKind> lookup_gate(const std::string& name) {
        static const std::map<std::string, GateKind> table = {
            {"h", GateKind::H},     {"x", GateKind::X},
            {"z", GateKind::Z},     {"s", GateKind::S},
            {"sdg", GateKind::Sdg}, {"t", GateKind::T},
            {"tdg", GateKind::Tdg}, {"rz", GateKind::Rz},
            {"rx", GateKind::Rx},   {"ry", GateKind::Ry},
            {"u", GateKind::U},     {"U", GateKind::U},
            {"u3", GateKind::U},    {"cx", GateKind::CX},
            {"CX", GateKind::CX},
        };
        auto it = table.find(name);
        if (it == table.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    // expression := term (('+'|'-') term)*
    double expression() {
        double value = term();
        while (peek_symbol("+") || peek_symbol("-")) {
            std::string op = lexer_.next().text;
            double rhs = term();
            value = (op == "+") ? value + rhs : value - rhs;
        }
        return value;
    }

    // term := factor (('*'|'/') factor)*
    double term() {
        double value = factor();
        while (peek_symbol("*") || peek_symbol("/")) {
            std::string op = lexer_.next().text;
            double rhs = factor();
            value = (op == "*") ? value * rhs : value / rhs;
        }
        return value;
    }

    // factor := '-' factor | '(' expr ')' | 'pi' | number
    double factor() {
        Token t = lexer_.peek();
        if (t.kind == TokenKind::Symbol && t.text == "-") {
            lexer_.next();
            return -factor();
        }
        if (t.kind == TokenKind::Symbol && t.text == "(") {
            lexer_.next();
            double value = expression();
            expect_symbol(")");
            return value;
        }
        if (t.kind == TokenKind::Identifier && t.text == "pi") {
            lexer_.next();
            return M_PI;
        }
        if (t.kind == TokenKind::Integer || t.kind == TokenKind::Real) {
            lexer_.next();
            double value = 0.0;
            auto result = std::from_chars(t.text.data(),
                                          t.text.data() + t.text.size(), value);
            if (result.ec != std::errc{}) {
                throw ParseError("invalid numeric literal '" + t.text + "'",
                                 t.line, t.column);
            }
            return value;
        }
        throw ParseError("expected an angle expression", t.line, t.column);
    }

    int qubit_operand() {
        Token reg = expect(TokenKind::Identifier, "qubit operand");
        check_qreg_name(reg);
        return finish_indexed_qubit(reg);
    }

    int finish_indexed_qubit(const Token& reg) {
        expect_symbol("[");
        Token idx = expect(TokenKind::Integer, "qubit index");
        int index = std::stoi(idx.text);
        expect_symbol("]");
        if (index < 0 || index >= circuit_.qubit_count) {
            throw ParseError("qubit index " + std::to_string(index) +
                                 " out of range for " + reg.text + "[" +
                                 std::to_string(circuit_.qubit_count) + "]",
                             idx.line, idx.column);
        }
        return index;
    }

    void check_qreg_name(const Token& reg) {
        if (!saw_qreg_) {
            throw ParseError("qubit used before qreg declaration", reg.line,
                             reg.column);
        }
        if (reg.text != circuit_.qreg_name) {
            throw ParseError("unknown quantum register '" + reg.text + "'",
                             reg.line, reg.column);
        }
    }

    int classical_operand() {
        Token reg = expect(TokenKind::Identifier, "classical operand");
        int creg = creg_index(reg);
        expect_symbol("[");
        Token idx = expect(TokenKind::Integer, "bit index");
        int index = std::stoi(idx.text);
        expect_symbol("]");
        const ClassicalRegister& r =
            circuit_.cregs[static_cast<std::size_t>(creg)];
        if (index < 0 || index >= r.size) {
            throw ParseError("bit index " + std::to_string(index) +
                                 " out of range for " + r.name + "[" +
                                 std::to_string(r.size) + "]",
                             idx.line, idx.column);
        }
        return r.offset + index;
    }

    int creg_index(const Token& name) {
        for (std::size_t i = 0; i < circuit_.cregs.size(); ++i) {
            if (circuit_.cregs[i].name == name.text) {
                return static_cast<int>(i);
            }
        }
        throw ParseError("unknown classical register '" + name.text + "'",
                         name.line, name.column);
    }

    bool peek_symbol(const std::string& s) {
        const Token& t = lexer_.peek();
        return t.kind == TokenKind::Symbol && t.text == s;
    }

    void expect_symbol(const std::string& s) {
        Token t = lexer_.next();
        if (t.kind != TokenKind::Symbol || t.text != s) {
            throw ParseError("expected '" + s + "'" +
                                 (t.text.empty() ? "" : ", got '" + t.text + "'"),
                             t.line, t.column);
        }
    }

    void expect_identifier(const std::string& s) {
        Token t = lexer_.next();
        if (t.kind != TokenKind::Identifier || t.text != s) {
            throw ParseError("expected '" + s + "'", t.line, t.column);
        }
    }

    Token expect(TokenKind kind, const std::string& what) {
        Token t = lexer_.next();
        if (t.kind != kind) {
            throw ParseError("expected " + what, t.line, t.column);
        }
        return t;
    }

    long long expect_integer() {
        Token t = expect(TokenKind::Integer, "integer");
        return std::stoll(t.text);
    }

    Lexer lexer_;
    Circuit circuit_;
    bool saw_qreg_ = false;
};

inline std::string format_double(double value) {
    char buffer[64];
    auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

} // namespace detail

namespace qasm {

/// Parses the supported OpenQASM 2.0 subset. Rejections carry line/column.
inline Circuit parse(const std::string& source) {
    detail::Parser parser(source);
    Circuit circuit = parser.parse();
    circuit.validate();
    return circuit;
}

/// Emits OpenQASM 2.0 text that parses back to an equal circuit.
inline std::string emit(const Circuit& circuit) {
    circuit.validate();
    std::ostringstream out;
    out << "OPENQASM 2.0;\n";
    out << "include \"qelib1.inc\";\n";
    out << "qreg " << circuit.qreg_name << "[" << circuit.qubit_count
        << "];\n";
    for (const ClassicalRegister& r : circuit.cregs) {
        out << "creg " << r.name << "[" << r.size << "];\n";
    }
    for (const Gate& g : circuit.gates) {
        if (g.cond.active()) {
            out << "if ("
                << circuit.cregs[static_cast<std::size_t>(g.cond.creg)].name
                << "==" << g.cond.value << ") ";
        }
        if (g.kind == GateKind::Barrier) {
            out << "barrier ";
            if (g.barrier_qubits.empty()) {
                out << circuit.qreg_name;
            } else {
                for (std::size_t i = 0; i < g.barrier_qubits.size(); ++i) {
                    if (i > 0) {
                        out << ",";
                    }
                    out << circuit.qreg_name << "[" << g.barrier_qubits[i]
                        << "]";
                }
            }
            out << ";\n";
            continue;
        }
        if (g.kind == GateKind::Measure) {
            int creg = circuit.creg_of_bit(g.cbit);
            const ClassicalRegister& r =
                circuit.cregs[static_cast<std::size_t>(creg)];
            out << "measure " << circuit.qreg_name << "[" << g.q0 << "] -> "
                << r.name << "[" << (g.cbit - r.offset) << "];\n";
            continue;
        }
        out << gate_name(g.kind);
        if (!g.params.empty()) {
            out << "(";
            for (std::size_t i = 0; i < g.params.size(); ++i) {
                if (i > 0) {
                    out << ",";
                }
                out << detail::format_double(g.params[i]);
            }
            out << ")";
        }
        out << " " << circuit.qreg_name << "[" << g.q0 << "]";
        if (g.kind == GateKind::CX) {
            out << "," << circuit.qreg_name << "[" << g.q1 << "]";
        }
        out << ";\n";
    }
    return out.str();
}

} // namespace qasm
} // namespace telemap
