#pragma once

#include <memory>
#include <string>
#include <vector>

#include "core/vec.hpp"

namespace stlshield::stl {

enum class NodeKind { Predicate, Not, And, Or, Finally, Globally, Until };

enum class Relation { Ge, Le };

// Atomic proposition: either membership in a named region or an affine
// inequality a1*x1 + a2*x2 + b ~ 0.
struct Predicate {
    enum class Kind { Region, Affine } kind = Kind::Region;
    // Region membership
    std::string region;
    bool inside = true;
    // Affine
    double a1 = 0.0;
    double a2 = 0.0;
    double b = 0.0;
    Relation rel = Relation::Ge;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable AST node. `children` is empty for predicates; an And node with
// zero children is the vacuously true empty specification.
struct Formula {
    NodeKind kind = NodeKind::And;
    Interval interval;
    Predicate pred;
    std::vector<FormulaPtr> children;
    std::size_t src_pos = 0;
};

FormulaPtr make_region(std::string name, bool inside = true);
FormulaPtr make_affine(double a1, double a2, double b, Relation rel);
FormulaPtr make_not(FormulaPtr child);
FormulaPtr make_and(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr make_or(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr make_finally(double lo, double hi, FormulaPtr child);
FormulaPtr make_globally(double lo, double hi, FormulaPtr child);
FormulaPtr make_until(double lo, double hi, FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr make_empty();

bool structurally_equal(const Formula& a, const Formula& b);

// Canonical concrete-syntax rendering; parse(print(f)) == f structurally for
// every grammar-valid AST.
std::string print(const Formula& f);

// Future time (in time units) needed to decide the formula.
double horizon(const Formula& f);

// Parses the concrete grammar and enforces the Φ/φ/ϕ stratification.
// Throws ParseError (syntax / interval / stratification).
FormulaPtr parse(const std::string& text);

// Region names referenced anywhere in the formula (deduplicated, in order of
// first appearance).
std::vector<std::string> referenced_regions(const Formula& f);

// Shortest round-trip formatting for numbers in printed formulas.
std::string format_number(double v);

}  // namespace stlshield::stl
