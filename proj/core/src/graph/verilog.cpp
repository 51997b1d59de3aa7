#include "edaplan/graph/verilog.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "edaplan/errors.hpp"

namespace edaplan::graph {

namespace {

enum class TokenKind { Identifier, Number, Symbol, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> tokenize() {
    std::vector<Token> tokens;
    for (;;) {
      skip_space_and_comments();
      Token token;
      token.line = line_;
      token.column = column_;
      if (pos_ >= text_.size()) {
        tokens.push_back(token);
        return tokens;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        token.kind = TokenKind::Identifier;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_' || text_[pos_] == '$')) {
          token.text += advance();
        }
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        token.kind = TokenKind::Number;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '\'' || text_[pos_] == '_')) {
          token.text += advance();
        }
      } else if (c == '\\') {
        throw UnsupportedConstruct("escaped identifiers are not supported", line_, column_);
      } else {
        token.kind = TokenKind::Symbol;
        token.text = advance();
      }
      tokens.push_back(std::move(token));
    }
  }

 private:
  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        const std::size_t line = line_, column = column_;
        advance();
        advance();
        while (pos_ + 1 < text_.size() && !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) advance();
        if (pos_ + 1 >= text_.size()) throw ParseError("unterminated block comment", line, column);
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

const std::unordered_set<std::string>& unsupported_keywords() {
  static const std::unordered_set<std::string> keywords{
      "always",   "assign",    "initial",  "reg",     "parameter", "localparam", "generate",
      "function", "task",      "integer",  "inout",   "supply0",   "supply1",    "tri",
      "genvar",   "specify",   "defparam", "logic",   "real",      "time",       "primitive",
      "begin",    "always_ff", "always_comb"};
  return keywords;
}

struct Signal {
  std::string name;
  std::optional<std::string> driver;
  std::vector<std::string> sinks;
  bool is_output_port = false;
  std::size_t line = 0;
  std::size_t column = 0;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, const VerilogOptions& options)
      : tokens_(std::move(tokens)), options_(options) {}

  Netlist parse() {
    expect_keyword("module");
    netlist_.name = expect_identifier("module name").text;
    std::vector<Token> header_ports;
    if (accept("(")) {
      if (!accept(")")) {
        do {
          if (peek().kind == TokenKind::Identifier && (peek().text == "input" || peek().text == "output")) {
            parse_declaration(true, &header_ports);
          } else {
            check_supported(peek());
            header_ports.push_back(expect_identifier("port name"));
          }
        } while (accept(","));
        expect(")");
      }
    }
    expect(";");
    for (const Token& port : header_ports) {
      if (header_tokens_.emplace(port.text, port).second) header_order_.push_back(port.text);
    }

    while (!(peek().kind == TokenKind::Identifier && peek().text == "endmodule")) {
      const Token& head = peek();
      if (head.kind == TokenKind::End) throw ParseError("missing 'endmodule'", head.line, head.column);
      check_supported(head);
      if (head.kind != TokenKind::Identifier) {
        throw UnsupportedConstruct("unexpected '" + head.text + "'", head.line, head.column);
      }
      if (head.text == "input" || head.text == "output" || head.text == "wire") {
        parse_declaration(false, nullptr);
      } else if (head.text == "module") {
        throw UnsupportedConstruct("nested module declaration", head.line, head.column);
      } else {
        parse_instance();
      }
    }
    next();  // endmodule
    const Token& trailing = peek();
    if (trailing.kind != TokenKind::End) {
      if (trailing.text == "module") {
        throw UnsupportedConstruct("multiple modules are not supported", trailing.line, trailing.column);
      }
      throw UnsupportedConstruct("unexpected '" + trailing.text + "' after endmodule", trailing.line,
                                 trailing.column);
    }
    return finish();
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  bool accept(std::string_view symbol) {
    if (peek().kind == TokenKind::Symbol && peek().text == symbol) {
      next();
      return true;
    }
    return false;
  }

  void expect(std::string_view symbol) {
    const Token& token = peek();
    if (!accept(symbol)) {
      check_supported(token);
      throw ParseError("expected '" + std::string(symbol) + "', got '" + describe(token) + "'", token.line,
                       token.column);
    }
  }

  void expect_keyword(std::string_view keyword) {
    const Token& token = peek();
    if (token.kind != TokenKind::Identifier || token.text != keyword) {
      throw ParseError("expected '" + std::string(keyword) + "', got '" + describe(token) + "'", token.line,
                       token.column);
    }
    next();
  }

  Token expect_identifier(const char* what) {
    const Token& token = peek();
    check_supported(token);
    if (token.kind != TokenKind::Identifier) {
      throw ParseError(std::string("expected ") + what + ", got '" + describe(token) + "'", token.line,
                       token.column);
    }
    return next();
  }

  static std::string describe(const Token& token) {
    return token.kind == TokenKind::End ? "end of file" : token.text;
  }

  static void check_supported(const Token& token) {
    if (token.kind == TokenKind::Identifier && unsupported_keywords().contains(token.text)) {
      throw UnsupportedConstruct("unsupported construct '" + token.text + "'", token.line, token.column);
    }
    if (token.kind == TokenKind::Symbol && token.text == "[") {
      throw UnsupportedConstruct("buses and bit selects are not supported", token.line, token.column);
    }
    if (token.kind == TokenKind::Symbol && token.text == "#") {
      throw UnsupportedConstruct("parameter overrides and delays are not supported", token.line,
                                 token.column);
    }
    if (token.kind == TokenKind::Symbol && token.text == "{") {
      throw UnsupportedConstruct("concatenations are not supported", token.line, token.column);
    }
    if (token.kind == TokenKind::Number) {
      throw UnsupportedConstruct("constant connections are not supported", token.line, token.column);
    }
  }

  Signal& declare(const Token& name) {
    auto [it, inserted] = signal_index_.emplace(name.text, signals_.size());
    if (inserted) {
      signals_.push_back({name.text, std::nullopt, {}, false, name.line, name.column});
    }
    return signals_[it->second];
  }

  // input|output [wire] a, b, c ;   (or, inside an ANSI header, without the ';')
  void parse_declaration(bool in_header, std::vector<Token>* header_ports) {
    const Token keyword = next();
    if (peek().kind == TokenKind::Identifier && peek().text == "wire") next();
    auto one = [&] {
      const Token name = expect_identifier("signal name");
      if (peek().kind == TokenKind::Symbol && peek().text == "[") check_supported(peek());
      Signal& signal = declare(name);
      if (keyword.text == "wire") return;
      const PortDirection direction = keyword.text == "input" ? PortDirection::In : PortDirection::Out;
      auto existing = port_direction_.find(name.text);
      if (existing != port_direction_.end()) {
        throw ParseError("port '" + name.text + "' declared twice", name.line, name.column);
      }
      port_direction_.emplace(name.text, direction);
      if (direction == PortDirection::In) {
        signal.driver = name.text;
      } else {
        signal.is_output_port = true;
      }
      if (header_ports != nullptr) header_ports->push_back(name);
    };
    if (peek().kind == TokenKind::Symbol && peek().text == "[") check_supported(peek());
    one();
    if (in_header) {
      // Further names in the same ANSI group share the direction until the next keyword.
      while (peek().kind == TokenKind::Symbol && peek().text == "," &&
             tokens_[pos_ + 1].kind == TokenKind::Identifier && tokens_[pos_ + 1].text != "input" &&
             tokens_[pos_ + 1].text != "output") {
        next();
        one();
      }
      return;
    }
    while (accept(",")) one();
    expect(";");
  }

  // CELLTYPE name ( .PIN(net), ... ) ;
  void parse_instance() {
    const Token type = expect_identifier("cell type");
    if (peek().kind == TokenKind::Symbol && peek().text == "#") check_supported(peek());
    const Token name = expect_identifier("instance name");
    if (cell_ids_.contains(name.text) || signal_index_.contains(name.text)) {
      throw ParseError("instance name '" + name.text + "' clashes with an existing declaration", name.line,
                       name.column);
    }
    cell_ids_.insert(name.text);
    netlist_.cells.push_back({name.text, type.text});
    expect("(");
    bool driver_assigned = false;
    if (!accept(")")) {
      do {
        const Token& dot = peek();
        if (!(dot.kind == TokenKind::Symbol && dot.text == ".")) {
          check_supported(dot);
          throw UnsupportedConstruct("positional port connections are not supported", dot.line, dot.column);
        }
        next();
        const Token pin = expect_identifier("pin name");
        expect("(");
        if (accept(")")) continue;  // unconnected pin
        const Token net = expect_identifier("net name");
        if (peek().kind == TokenKind::Symbol && peek().text == "[") check_supported(peek());
        expect(")");
        auto it = signal_index_.find(net.text);
        if (it == signal_index_.end()) {
          throw ParseError("undeclared net '" + net.text + "'", net.line, net.column);
        }
        Signal& signal = signals_[it->second];
        const bool is_driver_pin =
            !driver_assigned &&
            std::find(options_.driver_pins.begin(), options_.driver_pins.end(), pin.text) !=
                options_.driver_pins.end();
        if (is_driver_pin) {
          driver_assigned = true;
          if (signal.driver) {
            throw ValidationError("line " + std::to_string(net.line) + ": net '" + net.text +
                                  "' has multiple drivers ('" + *signal.driver + "' and '" + name.text +
                                  "')");
          }
          signal.driver = name.text;
        } else {
          signal.sinks.push_back(name.text);
        }
      } while (accept(","));
      expect(")");
    }
    expect(";");
  }

  Netlist finish() {
    for (const std::string& port : header_order_) {
      auto it = port_direction_.find(port);
      if (it == port_direction_.end()) {
        const Token& where = header_tokens_.at(port);
        throw ParseError("port '" + port + "' has no input/output declaration", where.line, where.column);
      }
      netlist_.ports.push_back({port, it->second});
    }
    for (const auto& [port, direction] : port_direction_) {
      if (!header_tokens_.contains(port)) {
        const Signal& s = signals_.at(signal_index_.at(port));
        throw ParseError("'" + port + "' declared as a port but missing from the module header", s.line,
                         s.column);
      }
    }
    for (Signal& signal : signals_) {
      if (signal.is_output_port) signal.sinks.push_back(signal.name);
      if (!signal.driver) {
        if (signal.sinks.empty()) continue;
        throw ValidationError("line " + std::to_string(signal.line) + ": net '" + signal.name +
                              "' has no driver");
      }
      netlist_.nets.push_back({*signal.driver, std::move(signal.sinks)});
    }
    validate(netlist_);
    return std::move(netlist_);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const VerilogOptions& options_;
  Netlist netlist_;
  std::vector<std::string> header_order_;
  std::unordered_map<std::string, Token> header_tokens_;
  std::unordered_map<std::string, PortDirection> port_direction_;
  std::vector<Signal> signals_;
  std::unordered_map<std::string, std::size_t> signal_index_;
  std::unordered_set<std::string> cell_ids_;
};

}  // namespace

Netlist parse_verilog_subset(std::string_view text, const VerilogOptions& options) {
  return Parser(Lexer(text).tokenize(), options).parse();
}

}  // namespace edaplan::graph
