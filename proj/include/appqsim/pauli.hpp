#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace appqsim {

enum class Axis : std::uint8_t { X, Y, Z };

inline char axis_char(Axis a) { return a == Axis::X ? 'X' : a == Axis::Y ? 'Y' : 'Z'; }

inline Axis axis_from_char(char c) {
    switch (c) {
        case 'X': case 'x': return Axis::X;
        case 'Y': case 'y': return Axis::Y;
        case 'Z': case 'z': return Axis::Z;
    }
    throw std::invalid_argument(std::string("not a Pauli axis: ") + c);
}

struct PauliFactor {
    int qubit;
    Axis axis;
    bool operator==(const PauliFactor&) const = default;
};

// Signed weighted Pauli string. factors sorted by qubit, unique.
struct PauliTerm {
    double coefficient = 1.0;
    std::vector<PauliFactor> factors;

    PauliTerm() = default;
    PauliTerm(double c, std::vector<PauliFactor> f) : coefficient(c), factors(std::move(f)) {
        validate();
    }

    void validate() const {
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (factors[i].qubit < 0) throw std::invalid_argument("negative qubit index");
            if (i && factors[i].qubit <= factors[i - 1].qubit)
                throw std::invalid_argument("pauli factors must have strictly increasing qubits");
        }
    }

    int weight() const { return static_cast<int>(factors.size()); }

    // "ZIIX"-style string, qubit 0 leftmost, length n
    static PauliTerm from_string(const std::string& s, double coeff = 1.0) {
        PauliTerm t;
        t.coefficient = coeff;
        for (std::size_t q = 0; q < s.size(); ++q)
            if (s[q] != 'I' && s[q] != 'i')
                t.factors.push_back({static_cast<int>(q), axis_from_char(s[q])});
        return t;
    }

    std::string to_string(int n) const {
        std::string s(static_cast<std::size_t>(n), 'I');
        for (const auto& f : factors) s[static_cast<std::size_t>(f.qubit)] = axis_char(f.axis);
        return s;
    }
};

struct TermSum {
    std::vector<PauliTerm> terms;
};

} // namespace appqsim
