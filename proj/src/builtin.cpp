#include <stdexcept>

#include "sardkit/examples.hpp"

namespace sardkit {

Distribution builtin(const std::string& name) {
    if (name == "heisenberg") return {VecField::basis(0), VecField::parse({"0", "1", "x"}), name};
    if (name == "martinet_flat") return {VecField::basis(0), VecField::parse({"0", "1", "x^2"}), name};
    if (name == "loop") return {VecField::basis(1), VecField::parse({"1", "0", "y^3/3 - x^2*y*(x+z)"}), name};
    // d/dx1 and d/dx2 + g d/dx3 give det = dg/dx1, so g is an x1-antiderivative
    // of the cone x3^2 - x1^2 - x2^2.
    if (name == "conical_frame") return {VecField::basis(0), VecField::parse({"0", "1", "x*z^2 - x^3/3 - x*y^2"}), name};
    throw std::invalid_argument("unknown builtin distribution '" + name + "'");
}

std::vector<std::string> builtin_names() { return {"heisenberg", "martinet_flat", "loop", "conical_frame"}; }

VecField loop_printed_Z() { return VecField::parse({"2*y", "3*x^2 + 2*x*(x+z)", "-4*y^4/3"}); }

const char* to_string(ChainField f) { return f == ChainField::Printed ? "printed" : "derived"; }

ChainField chain_field_from_string(const std::string& s) {
    if (s == "printed") return ChainField::Printed;
    if (s == "derived") return ChainField::Derived;
    throw std::invalid_argument("unknown chain field '" + s + "' (expected printed or derived)");
}

VecField chain_field(ChainField f) {
    if (f == ChainField::Printed) return VecField::parse({"-2*x*y", "-(3*x^3 + 2*y^2)", "4/3*x*y^4"});
    const MartinetData md = analyze(builtin("loop"));
    return Poly(-1) * Poly::var(0) * md.Z;
}

}  // namespace sardkit
