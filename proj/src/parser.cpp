#include "mground/parser.hpp"

#include <cctype>
#include <charconv>
#include <optional>

namespace mground {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message)
    , line_(line)
    , column_(column)
    , message_(message) {}

namespace {

enum class Tok {
    Identifier,
    Variable,
    Integer,
    AggregateName,
    Inf,
    Sup,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semicolon,
    Colon,
    If,
    Dot,
    Rel,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::int64_t value = 0;
    Relation rel = Relation::Equal;
    AggregateFunction func = AggregateFunction::Count;
    std::size_t line = 1;
    std::size_t column = 1;
};

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

class Lexer {
public:
    explicit Lexer(std::string_view text)
        : text_(text) {}

    Token next() {
        skip_space();
        Token tok;
        tok.line = line_;
        tok.column = column_;
        if (pos_ >= text_.size()) return tok;

        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '-' && digit_at(pos_ + 1))) {
            std::size_t start = pos_;
            advance();
            while (digit_at(pos_)) advance();
            tok.kind = Tok::Integer;
            tok.text = std::string(text_.substr(start, pos_ - start));
            auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.value);
            if (ec != std::errc{}) throw ParseError(tok.line, tok.column, "integer out of range: " + tok.text);
            return tok;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
            tok.text = std::string(text_.substr(start, pos_ - start));
            // Leading underscores are skipped when deciding: _X is a variable, __x a name.
            std::size_t first = tok.text.find_first_not_of('_');
            bool upper = first != std::string::npos && std::isupper(static_cast<unsigned char>(tok.text[first])) != 0;
            tok.kind = upper ? Tok::Variable : Tok::Identifier;
            return tok;
        }
        if (c == '#') {
            advance();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) advance();
            std::string word(text_.substr(start, pos_ - start));
            tok.text = "#" + word;
            if (word == "count") {
                tok.kind = Tok::AggregateName;
                tok.func = AggregateFunction::Count;
            } else if (word == "sum") {
                tok.kind = Tok::AggregateName;
                tok.func = AggregateFunction::Sum;
                if (pos_ < text_.size() && text_[pos_] == '+') {
                    advance();
                    tok.func = AggregateFunction::SumPlus;
                    tok.text += "+";
                } else if (pos_ < text_.size() && text_[pos_] == '-') {
                    advance();
                    tok.func = AggregateFunction::SumMinus;
                    tok.text += "-";
                }
            } else if (word == "inf") {
                tok.kind = Tok::Inf;
            } else if (word == "sup") {
                tok.kind = Tok::Sup;
            } else {
                throw ParseError(tok.line, tok.column, "unknown directive '" + tok.text + "'");
            }
            return tok;
        }
        advance();
        auto peek_is = [&](char x) { return pos_ < text_.size() && text_[pos_] == x; };
        switch (c) {
        case '(': tok.kind = Tok::LParen; break;
        case ')': tok.kind = Tok::RParen; break;
        case '{': tok.kind = Tok::LBrace; break;
        case '}': tok.kind = Tok::RBrace; break;
        case ',': tok.kind = Tok::Comma; break;
        case ';': tok.kind = Tok::Semicolon; break;
        case '.': tok.kind = Tok::Dot; break;
        case ':':
            if (peek_is('-')) {
                advance();
                tok.kind = Tok::If;
            } else {
                tok.kind = Tok::Colon;
            }
            break;
        case '<':
            tok.kind = Tok::Rel;
            tok.rel = Relation::Less;
            if (peek_is('=')) {
                advance();
                tok.rel = Relation::LessEq;
            }
            break;
        case '>':
            tok.kind = Tok::Rel;
            tok.rel = Relation::Greater;
            if (peek_is('=')) {
                advance();
                tok.rel = Relation::GreaterEq;
            }
            break;
        case '=':
            tok.kind = Tok::Rel;
            tok.rel = Relation::Equal;
            break;
        case '!':
            if (!peek_is('=')) throw ParseError(tok.line, tok.column, "expected '!='");
            advance();
            tok.kind = Tok::Rel;
            tok.rel = Relation::NotEqual;
            break;
        default:
            throw ParseError(tok.line, tok.column, std::string("unexpected character '") + c + "'");
        }
        tok.text = std::string(1, c);
        return tok;
    }

private:
    bool digit_at(std::size_t i) const {
        return i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]));
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

const char* describe(Tok kind) {
    switch (kind) {
    case Tok::Identifier: return "identifier";
    case Tok::Variable: return "variable";
    case Tok::Integer: return "integer";
    case Tok::AggregateName: return "aggregate";
    case Tok::Inf: return "#inf";
    case Tok::Sup: return "#sup";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Semicolon: return "';'";
    case Tok::Colon: return "':'";
    case Tok::If: return "':-'";
    case Tok::Dot: return "'.'";
    case Tok::Rel: return "relation";
    case Tok::End: return "end of input";
    }
    return "token";
}

class Parser {
public:
    explicit Parser(std::string_view text)
        : lexer_(text) {
        cur_ = lexer_.next();
        ahead_ = lexer_.next();
    }

    Program program() {
        Program p;
        while (cur_.kind != Tok::End) p.rules.push_back(rule());
        return p;
    }

private:
    void shift() {
        cur_ = std::move(ahead_);
        ahead_ = cur_.kind == Tok::End ? cur_ : lexer_.next();
    }

    [[noreturn]] void fail(const Token& at, const std::string& message) const {
        throw ParseError(at.line, at.column, message);
    }

    Token expect(Tok kind) {
        if (cur_.kind != kind) {
            fail(cur_, std::string("expected ") + describe(kind) + ", found " + found());
        }
        Token t = cur_;
        shift();
        return t;
    }

    std::string found() const {
        if (cur_.kind == Tok::End) return "end of input";
        return "'" + cur_.text + "'";
    }

    Rule rule() {
        Rule r;
        r.head = atom();
        if (cur_.kind == Tok::If) {
            shift();
            r.body.push_back(body_literal());
            while (cur_.kind == Tok::Comma) {
                shift();
                r.body.push_back(body_literal());
            }
        }
        expect(Tok::Dot);
        return r;
    }

    bool is_not() const { return cur_.kind == Tok::Identifier && cur_.text == "not"; }

    BodyLiteral body_literal() {
        if (is_not() && (ahead_.kind == Tok::Identifier || ahead_.kind == Tok::AggregateName)) {
            Token at = cur_;
            shift();
            if (cur_.kind == Tok::AggregateName) fail(at, "negated aggregates are not supported");
            if (is_not()) fail(at, "double negation is not supported");
            return Literal{atom(), true};
        }
        if (cur_.kind == Tok::AggregateName) return aggregate();
        Token at = cur_;
        Term left = term();
        if (cur_.kind == Tok::Rel) {
            Relation rel = cur_.rel;
            shift();
            return Comparison{std::move(left), rel, term()};
        }
        return Literal{to_atom(std::move(left), at), false};
    }

    Atom atom() {
        Token at = cur_;
        if (at.kind != Tok::Identifier) fail(at, "expected atom, found " + found());
        if (at.text == "not" && ahead_.kind == Tok::Identifier) {
            fail(at, "negation is only allowed in front of body atoms");
        }
        return to_atom(term(), at);
    }

    Atom to_atom(Term t, const Token& at) const {
        if (t.kind() != Term::Kind::Function) fail(at, "expected atom");
        if (t.name().rfind("__", 0) == 0) fail(at, "predicate name '" + t.name() + "' uses the reserved prefix __");
        return Atom{t.name(), t.args()};
    }

    Term term() {
        Token at = cur_;
        switch (cur_.kind) {
        case Tok::Variable: shift(); return Term::variable(at.text);
        case Tok::Integer: shift(); return Term::integer(at.value);
        case Tok::Inf: shift(); return Term::inf();
        case Tok::Sup: shift(); return Term::sup();
        case Tok::Identifier: {
            if (at.text == "_") fail(at, "anonymous variables are not supported");
            shift();
            std::vector<Term> args;
            if (cur_.kind == Tok::LParen) {
                shift();
                args = term_list();
                expect(Tok::RParen);
            }
            return Term::function(at.text, std::move(args));
        }
        default: fail(at, "expected term, found " + found());
        }
    }

    std::vector<Term> term_list() {
        std::vector<Term> out;
        out.push_back(term());
        while (cur_.kind == Tok::Comma) {
            shift();
            out.push_back(term());
        }
        return out;
    }

    Aggregate aggregate() {
        Aggregate a;
        a.func = cur_.func;
        shift();
        expect(Tok::LBrace);
        if (cur_.kind != Tok::RBrace) {
            a.elements.push_back(element());
            while (cur_.kind == Tok::Semicolon) {
                shift();
                a.elements.push_back(element());
            }
        }
        expect(Tok::RBrace);
        if (cur_.kind != Tok::Rel) fail(cur_, "expected relation after aggregate, found " + found());
        a.rel = cur_.rel;
        shift();
        a.bound = term();
        return a;
    }

    AggregateElement element() {
        AggregateElement e;
        if (cur_.kind != Tok::Colon) e.tuple = term_list();
        if (cur_.kind == Tok::Colon) {
            shift();
            if (cur_.kind != Tok::Semicolon && cur_.kind != Tok::RBrace) {
                e.condition.push_back(atom());
                while (cur_.kind == Tok::Comma) {
                    shift();
                    e.condition.push_back(atom());
                }
            }
        }
        return e;
    }

    Lexer lexer_;
    Token cur_;
    Token ahead_;
};

} // namespace

Program parse_program(std::string_view text) { return Parser(text).program(); }

} // namespace mground
