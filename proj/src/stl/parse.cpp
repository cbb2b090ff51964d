#include <cctype>
#include <charconv>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "stl/formula.hpp"

namespace stlshield::stl {

namespace {

enum class Tok {
    End, Word, Number, LParen, RParen, LBrack, RBrack,
    Comma, Amp, Pipe, Bang, Star, Plus, Minus, Ge, Le,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    double value = 0.0;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return cur_; }

    Token take() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
        cur_ = Token{};
        cur_.pos = i_;
        if (i_ >= src_.size()) {
            cur_.kind = Tok::End;
            return;
        }
        char c = src_[i_];
        auto single = [&](Tok k) {
            cur_.kind = k;
            cur_.text = std::string(1, c);
            ++i_;
        };
        switch (c) {
            case '(': single(Tok::LParen); return;
            case ')': single(Tok::RParen); return;
            case '[': single(Tok::LBrack); return;
            case ']': single(Tok::RBrack); return;
            case ',': single(Tok::Comma); return;
            case '&': single(Tok::Amp); return;
            case '|': single(Tok::Pipe); return;
            case '!': single(Tok::Bang); return;
            case '*': single(Tok::Star); return;
            case '+': single(Tok::Plus); return;
            case '-': single(Tok::Minus); return;
            case '>':
            case '<': {
                if (i_ + 1 >= src_.size() || src_[i_ + 1] != '=') {
                    throw ParseError(ErrorCode::Parse, i_,
                                     std::string("expected '") + c + "=' relational operator");
                }
                cur_.kind = (c == '>') ? Tok::Ge : Tok::Le;
                cur_.text = std::string(1, c) + "=";
                i_ += 2;
                return;
            }
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = src_.data() + i_;
            const char* end = src_.data() + src_.size();
            double value = 0.0;
            auto res = std::from_chars(begin, end, value);
            if (res.ec != std::errc{}) {
                throw ParseError(ErrorCode::Parse, i_, "malformed number");
            }
            cur_.kind = Tok::Number;
            cur_.value = value;
            cur_.text = std::string(begin, res.ptr);
            i_ += static_cast<std::size_t>(res.ptr - begin);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) {
                ++j;
            }
            cur_.kind = Tok::Word;
            cur_.text = src_.substr(i_, j - i_);
            i_ = j;
            return;
        }
        throw ParseError(ErrorCode::Parse, i_, std::string("unexpected character '") + c + "'");
    }

    const std::string& src_;
    std::size_t i_ = 0;
    Token cur_;
};

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    FormulaPtr parse_spec() {
        if (lex_.peek().kind == Tok::End) return make_empty();
        FormulaPtr f = parse_formula();
        expect(Tok::End, "unexpected trailing input");
        return f;
    }

private:
    Token expect(Tok kind, const char* what) {
        if (lex_.peek().kind != kind) {
            throw ParseError(ErrorCode::Parse, lex_.peek().pos, what);
        }
        return lex_.take();
    }

    // formula = conjunction { "|" conjunction } ; '&' binds tighter than '|'.
    FormulaPtr parse_formula() {
        FormulaPtr f = parse_conjunction();
        while (lex_.peek().kind == Tok::Pipe) {
            std::size_t pos = lex_.take().pos;
            FormulaPtr rhs = parse_conjunction();
            auto n = make_or(std::move(f), std::move(rhs));
            const_cast<Formula&>(*n).src_pos = pos;
            f = n;
        }
        return f;
    }

    FormulaPtr parse_conjunction() {
        FormulaPtr f = parse_clause();
        while (lex_.peek().kind == Tok::Amp) {
            std::size_t pos = lex_.take().pos;
            FormulaPtr rhs = parse_clause();
            auto n = make_and(std::move(f), std::move(rhs));
            const_cast<Formula&>(*n).src_pos = pos;
            f = n;
        }
        return f;
    }

    Interval parse_interval(std::size_t op_pos) {
        expect(Tok::LBrack, "expected '[' after temporal operator");
        Token lo = expect(Tok::Number, "expected interval lower bound");
        expect(Tok::Comma, "expected ',' in interval");
        Token hi = expect(Tok::Number, "expected interval upper bound");
        expect(Tok::RBrack, "expected ']' closing interval");
        if (hi.value < lo.value) {
            throw ParseError(ErrorCode::Interval, op_pos,
                             "interval upper bound " + format_number(hi.value) +
                                 " is below lower bound " + format_number(lo.value));
        }
        return {lo.value, hi.value};
    }

    FormulaPtr parse_clause() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Word && (t.text == "G" || t.text == "F")) {
            Token op = lex_.take();
            Interval iv = parse_interval(op.pos);
            FormulaPtr child = parse_clause();
            auto n = (op.text == "F") ? make_finally(iv.lo, iv.hi, std::move(child))
                                      : make_globally(iv.lo, iv.hi, std::move(child));
            const_cast<Formula&>(*n).src_pos = op.pos;
            return n;
        }
        if (t.kind == Tok::Word && t.text == "U") {
            Token op = lex_.take();
            Interval iv = parse_interval(op.pos);
            expect(Tok::LParen, "expected '(' after until interval");
            FormulaPtr lhs = parse_formula();
            expect(Tok::Comma, "expected ',' between until operands");
            FormulaPtr rhs = parse_formula();
            expect(Tok::RParen, "expected ')' closing until");
            auto n = make_until(iv.lo, iv.hi, std::move(lhs), std::move(rhs));
            const_cast<Formula&>(*n).src_pos = op.pos;
            return n;
        }
        if (t.kind == Tok::LParen) {
            lex_.take();
            FormulaPtr f = parse_formula();
            expect(Tok::RParen, "expected ')'");
            return f;
        }
        return parse_atom();
    }

    FormulaPtr parse_atom() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Bang) {
            Token bang = lex_.take();
            FormulaPtr child = parse_atom();
            auto n = make_not(std::move(child));
            const_cast<Formula&>(*n).src_pos = bang.pos;
            return n;
        }
        if (t.kind == Tok::Word && t.text == "in") {
            Token word = lex_.take();
            expect(Tok::LParen, "expected '(' after 'in'");
            Token name = expect(Tok::Word, "expected region name");
            expect(Tok::RParen, "expected ')' closing region name");
            auto n = make_region(name.text);
            const_cast<Formula&>(*n).src_pos = word.pos;
            return n;
        }
        return parse_affine();
    }

    // affine = signed term { ("+"|"-") term } relop number, folded into
    // a1*x1 + a2*x2 + b ~ 0. Terms: number, number "*" var, or bare var.
    FormulaPtr parse_affine() {
        std::size_t start = lex_.peek().pos;
        double a1 = 0.0;
        double a2 = 0.0;
        double b = 0.0;
        bool first = true;
        while (true) {
            double sign = 1.0;
            if (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
                sign = (lex_.take().kind == Tok::Minus) ? -1.0 : 1.0;
            } else if (!first) {
                break;
            }
            const Token& t = lex_.peek();
            if (t.kind == Tok::Number) {
                Token num = lex_.take();
                if (lex_.peek().kind == Tok::Star) {
                    lex_.take();
                    Token var = expect(Tok::Word, "expected x1 or x2 after '*'");
                    add_var(var, sign * num.value, a1, a2);
                } else {
                    b += sign * num.value;
                }
            } else if (t.kind == Tok::Word && (t.text == "x1" || t.text == "x2")) {
                Token var = lex_.take();
                add_var(var, sign, a1, a2);
            } else {
                throw ParseError(ErrorCode::Parse, t.pos, "expected predicate term");
            }
            first = false;
        }
        const Token& rel = lex_.peek();
        if (rel.kind != Tok::Ge && rel.kind != Tok::Le) {
            throw ParseError(ErrorCode::Parse, rel.pos, "expected '>=' or '<=' in predicate");
        }
        Relation r = (lex_.take().kind == Tok::Ge) ? Relation::Ge : Relation::Le;
        double rhs_sign = 1.0;
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            rhs_sign = -1.0;
        }
        Token rhs = expect(Tok::Number, "expected constant right-hand side");
        b -= rhs_sign * rhs.value;
        auto n = make_affine(a1, a2, b, r);
        const_cast<Formula&>(*n).src_pos = start;
        return n;
    }

    static void add_var(const Token& var, double coeff, double& a1, double& a2) {
        if (var.text == "x1") {
            a1 += coeff;
        } else if (var.text == "x2") {
            a2 += coeff;
        } else {
            throw ParseError(ErrorCode::Parse, var.pos, "unknown variable '" + var.text + "'");
        }
    }

    Lexer lex_;
};

// --- grammar stratification (Φ / φ / ϕ levels) -----------------------------

bool is_varphi(const Formula& f) {
    switch (f.kind) {
        case NodeKind::Predicate:
            return true;
        case NodeKind::Not:
            return is_varphi(*f.children[0]);
        case NodeKind::And:
        case NodeKind::Or:
            for (const auto& c : f.children) {
                if (!is_varphi(*c)) return false;
            }
            return true;
        default:
            return false;
    }
}

bool is_phi(const Formula& f) {
    if (is_varphi(f)) return true;
    switch (f.kind) {
        case NodeKind::Not:
            return is_phi(*f.children[0]);
        case NodeKind::Finally:
        case NodeKind::Globally:
            return is_varphi(*f.children[0]);
        default:
            return false;
    }
}

[[noreturn]] void stratification_fail(const Formula& f, const std::string& why) {
    throw ParseError(ErrorCode::Stratification, f.src_pos,
                     "grammar stratification violation: " + why + " in '" + print(f) + "'");
}

void check_top(const Formula& f) {
    switch (f.kind) {
        case NodeKind::And:
        case NodeKind::Or:
            for (const auto& c : f.children) check_top(*c);
            return;
        case NodeKind::Finally:
        case NodeKind::Globally:
            if (!is_phi(*f.children[0])) {
                stratification_fail(*f.children[0],
                                    "operand nests temporal operators more than one level deep");
            }
            return;
        case NodeKind::Until:
            if (!is_varphi(*f.children[0]) || !is_varphi(*f.children[1])) {
                stratification_fail(f, "until operands must be temporal-free inner specifications");
            }
            return;
        case NodeKind::Not:
            stratification_fail(f, "negation is not allowed at the specification top level");
        case NodeKind::Predicate:
            stratification_fail(f, "bare predicate at the specification top level");
    }
}

}  // namespace

FormulaPtr parse(const std::string& text) {
    Parser p(text);
    FormulaPtr f = p.parse_spec();
    if (!(f->kind == NodeKind::And && f->children.empty())) {
        check_top(*f);
    }
    return f;
}

}  // namespace stlshield::stl
