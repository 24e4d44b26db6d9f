#include "gravsim/qasm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "gravsim/errors.hpp"

namespace gravsim {

namespace {

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int max_cbit(const Circuit& c) {
  int m = -1;
  for (const auto& meas : c.measurements) m = std::max(m, meas.cbit);
  return m;
}

struct Token {
  enum Kind { Ident, Number, Punct, End } kind = End;
  std::string text;
  int line = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_space_and_comments();
    Token t;
    t.line = line_;
    if (pos_ >= text_.size()) {
      t.kind = Token::End;
      return t;
    }
    const char ch = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      t.kind = Token::Ident;
      t.text = text_.substr(start, pos_ - start);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '.' || text_[pos_] == 'e' ||
                                     text_[pos_] == 'E' ||
                                     ((text_[pos_] == '+' || text_[pos_] == '-') &&
                                      (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
        ++pos_;
      t.kind = Token::Number;
      t.text = text_.substr(start, pos_ - start);
      return t;
    }
    if (ch == '"') {
      std::size_t end = text_.find('"', pos_ + 1);
      if (end == std::string::npos) throw ParseError(line_, "unterminated string");
      t.kind = Token::Punct;
      t.text = text_.substr(pos_, end - pos_ + 1);
      pos_ = end + 1;
      return t;
    }
    if (ch == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      t.kind = Token::Punct;
      t.text = "->";
      pos_ += 2;
      return t;
    }
    t.kind = Token::Punct;
    t.text = std::string(1, ch);
    ++pos_;
    return t;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      const char ch = text_[pos_];
      if (ch == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else if (ch == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lexer_(text) { advance(); }

  Circuit parse() {
    expect_ident("OPENQASM");
    if (cur_.kind != Token::Number || cur_.text != "2.0")
      throw ParseError(cur_.line, "expected version 2.0");
    advance();
    expect_punct(";");
    expect_ident("include");
    expect_punct("\"qelib1.inc\"");
    expect_punct(";");

    while (cur_.kind != Token::End) statement();

    if (qreg_size_ == 0) throw ParseError(cur_.line, "missing qreg declaration");
    Circuit c(qreg_size_);
    c.ops = std::move(ops_);
    c.measurements = std::move(measurements_);
    return c;
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  void expect_ident(const std::string& text) {
    if (cur_.kind != Token::Ident || cur_.text != text)
      throw ParseError(cur_.line, "expected '" + text + "', got '" + cur_.text + "'");
    advance();
  }

  void expect_punct(const std::string& text) {
    if (cur_.kind != Token::Punct || cur_.text != text)
      throw ParseError(cur_.line, "expected '" + text + "', got '" + cur_.text + "'");
    advance();
  }

  int expect_int() {
    if (cur_.kind != Token::Number) throw ParseError(cur_.line, "expected an integer");
    for (char ch : cur_.text)
      if (!std::isdigit(static_cast<unsigned char>(ch)))
        throw ParseError(cur_.line, "expected an integer, got '" + cur_.text + "'");
    const long v = std::strtol(cur_.text.c_str(), nullptr, 10);
    if (v < 0 || v > 1000000) throw ParseError(cur_.line, "integer out of range");
    advance();
    return static_cast<int>(v);
  }

  int register_index(const std::string& name, int size) {
    expect_punct("[");
    const int line = cur_.line;
    const int idx = expect_int();
    expect_punct("]");
    if (idx >= size)
      throw ParseError(line, "index " + std::to_string(idx) + " out of range for register '" +
                                 name + "'");
    return idx;
  }

  int qubit_operand() {
    if (qreg_size_ == 0) throw ParseError(cur_.line, "qreg used before declaration");
    expect_ident(qreg_name_);
    return register_index(qreg_name_, qreg_size_);
  }

  // decimal, pi, pi/INT, INT*pi/INT, each with an optional leading '-'
  double angle() {
    const int line = cur_.line;
    double sign = 1.0;
    if (cur_.kind == Token::Punct && cur_.text == "-") {
      sign = -1.0;
      advance();
    }
    if (cur_.kind == Token::Ident && cur_.text == "pi") {
      advance();
      double v = std::numbers::pi;
      if (cur_.kind == Token::Punct && cur_.text == "/") {
        advance();
        const int den = expect_int();
        if (den == 0) throw ParseError(line, "division by zero in angle");
        v /= den;
      }
      return sign * v;
    }
    if (cur_.kind != Token::Number) throw ParseError(line, "malformed angle");
    const std::string num = cur_.text;
    advance();
    if (cur_.kind == Token::Punct && cur_.text == "*") {
      advance();
      expect_ident("pi");
      expect_punct("/");
      const int den = expect_int();
      if (den == 0) throw ParseError(line, "division by zero in angle");
      const double mult = parse_number(num, line);
      return sign * mult * std::numbers::pi / den;
    }
    return sign * parse_number(num, line);
  }

  static double parse_number(const std::string& text, int line) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v))
      throw ParseError(line, "malformed number '" + text + "'");
    return v;
  }

  void declare_register(bool quantum) {
    const int line = cur_.line;
    if (cur_.kind != Token::Ident) throw ParseError(line, "expected a register name");
    const std::string name = cur_.text;
    advance();
    expect_punct("[");
    const int size = expect_int();
    expect_punct("]");
    expect_punct(";");
    if (quantum) {
      if (qreg_size_ != 0) throw ParseError(line, "only one qreg is supported");
      if (size < 1 || size > 12) throw ParseError(line, "qreg size must be 1..12");
      qreg_name_ = name;
      qreg_size_ = size;
    } else {
      if (creg_size_ != 0) throw ParseError(line, "only one creg is supported");
      if (size < 1 || size > 64) throw ParseError(line, "creg size must be 1..64");
      creg_name_ = name;
      creg_size_ = size;
    }
  }

  void statement() {
    if (cur_.kind != Token::Ident)
      throw ParseError(cur_.line, "expected a statement, got '" + cur_.text + "'");
    const int line = cur_.line;
    const std::string head = cur_.text;
    advance();

    if (head == "qreg") {
      declare_register(true);
      return;
    }
    if (head == "creg") {
      declare_register(false);
      return;
    }
    if (head == "measure") {
      const int q = qubit_operand();
      expect_punct("->");
      if (creg_size_ == 0) throw ParseError(cur_.line, "creg used before declaration");
      expect_ident(creg_name_);
      const int cbit = register_index(creg_name_, creg_size_);
      expect_punct(";");
      measurements_.push_back({q, cbit});
      return;
    }
    if (head == "h" || head == "x" || head == "s" || head == "sdg") {
      const int q = qubit_operand();
      expect_punct(";");
      if (head == "h") ops_.push_back({Gate::h(), {q}, ""});
      if (head == "x") ops_.push_back({Gate::x(), {q}, ""});
      if (head == "s") ops_.push_back({Gate::s(), {q}, ""});
      if (head == "sdg") ops_.push_back({Gate::sdg(), {q}, ""});
      return;
    }
    if (head == "rz") {
      expect_punct("(");
      const double theta = angle();
      expect_punct(")");
      const int q = qubit_operand();
      expect_punct(";");
      ops_.push_back({Gate::rz(theta), {q}, ""});
      return;
    }
    if (head == "cx") {
      const int control = qubit_operand();
      expect_punct(",");
      const int target = qubit_operand();
      expect_punct(";");
      if (control == target) throw ParseError(line, "cx control equals target");
      ops_.push_back({Gate::cx(), {control, target}, ""});
      return;
    }
    throw ParseError(line, "unknown gate '" + head + "'");
  }

  Lexer lexer_;
  Token cur_;
  std::string qreg_name_;
  std::string creg_name_;
  int qreg_size_ = 0;
  int creg_size_ = 0;
  std::vector<CircuitOp> ops_;
  std::vector<Measurement> measurements_;
};

}  // namespace

std::string emit_qasm(const Circuit& c) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\n";
  out << "include \"qelib1.inc\";\n";
  out << "qreg q[" << c.num_qubits << "];\n";
  const int cbits = c.measurements.empty() ? c.num_qubits : max_cbit(c) + 1;
  out << "creg c[" << cbits << "];\n";
  for (const auto& op : c.ops) {
    switch (op.gate.kind) {
      case GateKind::H:
        out << "h q[" << op.targets[0] << "];\n";
        break;
      case GateKind::X:
        out << "x q[" << op.targets[0] << "];\n";
        break;
      case GateKind::S:
        out << "s q[" << op.targets[0] << "];\n";
        break;
      case GateKind::Sdg:
        out << "sdg q[" << op.targets[0] << "];\n";
        break;
      case GateKind::Rz:
        out << "rz(" << format_float(op.gate.theta) << ") q[" << op.targets[0] << "];\n";
        break;
      case GateKind::CX:
        out << "cx q[" << op.targets[0] << "],q[" << op.targets[1] << "];\n";
        break;
      case GateKind::Diag4:
        throw MustDecomposeError("Diag4 has no OpenQASM 2.0 name; decompose it first");
    }
  }
  for (const auto& m : c.measurements)
    out << "measure q[" << m.qubit << "] -> c[" << m.cbit << "];\n";
  return out.str();
}

Circuit parse_qasm(const std::string& text) {
  Parser p(text);
  return p.parse();
}

Circuit apply_coupling_map(const Circuit& c, const std::vector<std::pair<int, int>>& allowed) {
  const auto permitted = [&](int control, int target) {
    return std::find(allowed.begin(), allowed.end(), std::make_pair(control, target)) !=
           allowed.end();
  };

  Circuit out(c.num_qubits);
  out.global_phase = c.global_phase;
  out.measurements = c.measurements;
  for (const auto& op : c.ops) {
    if (op.gate.kind != GateKind::CX) {
      out.ops.push_back(op);
      continue;
    }
    const int control = op.targets[0];
    const int target = op.targets[1];
    if (permitted(control, target)) {
      out.ops.push_back(op);
      continue;
    }
    if (!permitted(target, control)) {
      std::ostringstream os;
      os << "coupling map allows neither cx " << control << "," << target << " nor its reverse";
      throw ConfigError(os.str());
    }
    out.append(Gate::h(), {control}, op.label);
    out.append(Gate::h(), {target}, op.label);
    out.append(Gate::cx(), {target, control}, op.label);
    out.append(Gate::h(), {control}, op.label);
    out.append(Gate::h(), {target}, op.label);
  }
  return out;
}

}  // namespace gravsim
