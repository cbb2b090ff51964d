#include "stl/formula.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "core/error.hpp"

namespace stlshield::stl {

namespace {

FormulaPtr node(NodeKind kind) {
    auto f = std::make_shared<Formula>();
    f->kind = kind;
    return f;
}

}  // namespace

FormulaPtr make_region(std::string name, bool inside) {
    auto f = std::make_shared<Formula>();
    f->kind = NodeKind::Predicate;
    f->pred.kind = Predicate::Kind::Region;
    f->pred.region = std::move(name);
    f->pred.inside = inside;
    return f;
}

FormulaPtr make_affine(double a1, double a2, double b, Relation rel) {
    auto f = std::make_shared<Formula>();
    f->kind = NodeKind::Predicate;
    f->pred.kind = Predicate::Kind::Affine;
    f->pred.a1 = a1;
    f->pred.a2 = a2;
    f->pred.b = b;
    f->pred.rel = rel;
    return f;
}

FormulaPtr make_not(FormulaPtr child) {
    auto f = std::make_shared<Formula>();
    f->kind = NodeKind::Not;
    f->children = {std::move(child)};
    return f;
}

FormulaPtr make_and(FormulaPtr lhs, FormulaPtr rhs) {
    auto f = std::make_shared<Formula>();
    f->kind = NodeKind::And;
    f->children = {std::move(lhs), std::move(rhs)};
    return f;
}

FormulaPtr make_or(FormulaPtr lhs, FormulaPtr rhs) {
    auto f = std::make_shared<Formula>();
    f->kind = NodeKind::Or;
    f->children = {std::move(lhs), std::move(rhs)};
    return f;
}

FormulaPtr make_finally(double lo, double hi, FormulaPtr child) {
    auto f = std::make_shared<Formula>();
    f->kind = NodeKind::Finally;
    f->interval = {lo, hi};
    f->children = {std::move(child)};
    return f;
}

FormulaPtr make_globally(double lo, double hi, FormulaPtr child) {
    auto f = std::make_shared<Formula>();
    f->kind = NodeKind::Globally;
    f->interval = {lo, hi};
    f->children = {std::move(child)};
    return f;
}

FormulaPtr make_until(double lo, double hi, FormulaPtr lhs, FormulaPtr rhs) {
    auto f = std::make_shared<Formula>();
    f->kind = NodeKind::Until;
    f->interval = {lo, hi};
    f->children = {std::move(lhs), std::move(rhs)};
    return f;
}

FormulaPtr make_empty() { return node(NodeKind::And); }

bool structurally_equal(const Formula& a, const Formula& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == NodeKind::Predicate) {
        const Predicate& pa = a.pred;
        const Predicate& pb = b.pred;
        if (pa.kind != pb.kind) return false;
        if (pa.kind == Predicate::Kind::Region) {
            return pa.region == pb.region && pa.inside == pb.inside;
        }
        return pa.a1 == pb.a1 && pa.a2 == pb.a2 && pa.b == pb.b && pa.rel == pb.rel;
    }
    if (a.kind == NodeKind::Finally || a.kind == NodeKind::Globally || a.kind == NodeKind::Until) {
        if (a.interval.lo != b.interval.lo || a.interval.hi != b.interval.hi) return false;
    }
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!structurally_equal(*a.children[i], *b.children[i])) return false;
    }
    return true;
}

std::string format_number(double v) {
    if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

// Precedence: Or < And < everything else.
int precedence(NodeKind k) {
    switch (k) {
        case NodeKind::Or: return 0;
        case NodeKind::And: return 1;
        default: return 2;
    }
}

std::string print_affine(const Predicate& p) {
    std::string out;
    auto append_term = [&out](double coeff, const char* var) {
        if (coeff == 0.0) return;
        double mag = std::fabs(coeff);
        if (out.empty()) {
            if (coeff < 0.0) out += "-";
        } else {
            out += (coeff < 0.0) ? " - " : " + ";
        }
        if (var == nullptr) {
            out += format_number(mag);
        } else {
            if (mag != 1.0) {
                out += format_number(mag);
                out += "*";
            }
            out += var;
        }
    };
    append_term(p.a1, "x1");
    append_term(p.a2, "x2");
    append_term(p.b, nullptr);
    if (out.empty()) out = "0";
    out += (p.rel == Relation::Ge) ? " >= 0" : " <= 0";
    return out;
}

std::string interval_text(const Interval& iv) {
    return "[" + format_number(iv.lo) + "," + format_number(iv.hi) + "]";
}

void print_rec(const Formula& f, std::string& out);

// Children of temporal operators are clauses: composite booleans and affine
// atoms get parenthesized, nested temporals and region atoms do not.
void print_clause_child(const Formula& c, std::string& out) {
    bool parens = c.kind == NodeKind::And || c.kind == NodeKind::Or ||
                  (c.kind == NodeKind::Predicate && c.pred.kind == Predicate::Kind::Affine);
    if (parens) {
        out += "(";
        print_rec(c, out);
        out += ")";
    } else {
        print_rec(c, out);
    }
}

void print_binary(const Formula& f, const char* op, std::string& out) {
    const Formula& l = *f.children[0];
    const Formula& r = *f.children[1];
    int p = precedence(f.kind);
    // Left child needs parens only below this precedence; the right child also
    // needs them at equal precedence so left association survives reparsing.
    if (precedence(l.kind) < p) {
        out += "(";
        print_rec(l, out);
        out += ")";
    } else {
        print_rec(l, out);
    }
    out += op;
    if (precedence(r.kind) <= p) {
        out += "(";
        print_rec(r, out);
        out += ")";
    } else {
        print_rec(r, out);
    }
}

void print_rec(const Formula& f, std::string& out) {
    switch (f.kind) {
        case NodeKind::Predicate:
            if (f.pred.kind == Predicate::Kind::Region) {
                if (!f.pred.inside) out += "!";
                out += "in(" + f.pred.region + ")";
            } else {
                out += print_affine(f.pred);
            }
            return;
        case NodeKind::Not: {
            const Formula& c = *f.children[0];
            out += "!";
            if (c.kind == NodeKind::Predicate && c.pred.kind == Predicate::Kind::Region) {
                print_rec(c, out);
            } else {
                // Not representable in the concrete grammar; printed for
                // diagnostics only.
                out += "(";
                print_rec(c, out);
                out += ")";
            }
            return;
        }
        case NodeKind::And:
            if (f.children.empty()) return;  // empty specification
            print_binary(f, " & ", out);
            return;
        case NodeKind::Or:
            print_binary(f, " | ", out);
            return;
        case NodeKind::Finally:
        case NodeKind::Globally:
            out += (f.kind == NodeKind::Finally) ? "F" : "G";
            out += interval_text(f.interval);
            out += " ";
            print_clause_child(*f.children[0], out);
            return;
        case NodeKind::Until:
            out += "U" + interval_text(f.interval) + "(";
            print_rec(*f.children[0], out);
            out += ", ";
            print_rec(*f.children[1], out);
            out += ")";
            return;
    }
}

}  // namespace

std::string print(const Formula& f) {
    std::string out;
    print_rec(f, out);
    return out;
}

double horizon(const Formula& f) {
    switch (f.kind) {
        case NodeKind::Predicate:
            return 0.0;
        case NodeKind::Not:
            return horizon(*f.children[0]);
        case NodeKind::And:
        case NodeKind::Or: {
            double h = 0.0;
            for (const auto& c : f.children) h = std::max(h, horizon(*c));
            return h;
        }
        case NodeKind::Finally:
        case NodeKind::Globally:
            return f.interval.hi + horizon(*f.children[0]);
        case NodeKind::Until:
            return f.interval.hi + std::max(horizon(*f.children[0]), horizon(*f.children[1]));
    }
    return 0.0;
}

namespace {

void collect_regions(const Formula& f, std::vector<std::string>& out) {
    if (f.kind == NodeKind::Predicate) {
        if (f.pred.kind == Predicate::Kind::Region &&
            std::find(out.begin(), out.end(), f.pred.region) == out.end()) {
            out.push_back(f.pred.region);
        }
        return;
    }
    for (const auto& c : f.children) collect_regions(*c, out);
}

}  // namespace

std::vector<std::string> referenced_regions(const Formula& f) {
    std::vector<std::string> out;
    collect_regions(f, out);
    return out;
}

}  // namespace stlshield::stl
