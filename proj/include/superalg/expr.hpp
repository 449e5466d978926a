#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "superalg/grassmann.hpp"

namespace superalg {

// Expressions over Lambda_n:
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := '-' factor | number | 'i' | 'th'digits | name '(' expr (',' expr)* ')' | '(' expr ')'
// Numbers are integers, p/q fractions or decimals; all are exact. The minus
// sign may also be written as U+2212.
struct Expr {
    enum class Kind { Number, Imag, Gen, Add, Sub, Mul, Neg, Call };
    Kind kind = Kind::Number;
    Q value = 0;    // Number
    int scale = -1; // Number: digits after the point for decimals, -1 for p/q
    int gen = 0;    // Gen
    std::string fn; // Call
    std::vector<Expr> args;

    friend bool operator==(const Expr& a, const Expr& b);
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t offset);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Known calls: ber(a, b, c, d) and piber(a, b, c, d) of the 1|1 matrix
// ((a, b), (c, d)), integrate, fourier, conj (complex), C (parity conjugation).
Expr parse_expr(const std::string& source, int n);
// Minimal parenthesization; parse_expr(print_expr(e), n) == e.
std::string print_expr(const Expr& e);

// Throws RingError for 'i' or fourier over a real ring.
template <class S>
Grassmann<S> evaluate_expr(const Expr& e, int n);

}  // namespace superalg
