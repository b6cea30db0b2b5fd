#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "torusmin/cyclotomic.hpp"
#include "torusmin/exact.hpp"
#include "torusmin/matrix.hpp"
#include "torusmin/polynomial.hpp"
#include "torusmin/roots.hpp"

namespace torusmin {

struct NotUnimodular : std::domain_error {
    explicit NotUnimodular(const std::string& w) : std::domain_error(w) {}
};
struct NotMonic : std::domain_error {
    explicit NotMonic(const std::string& w) : std::domain_error(w) {}
};
struct NotIntegerCoefficients : std::domain_error {
    explicit NotIntegerCoefficients(const std::string& w) : std::domain_error(w) {}
};

enum class RootClass { RootOfUnity, UnimodularNotRou, OffCircle, Undecided };

struct RootWitness {
    CNum approx;
    Real radius;
    int multiplicity;
    RootClass cls;
};

struct RootCensus {
    int n_roots_of_unity = 0;
    int n_unimodular_not_rou = 0;
    int n_off_circle = 0;
    int n_undecided = 0;
    std::vector<RootWitness> witnesses;
};

enum class Verdict { ExcludedLefschetz, ExcludedSpectrum, ConstructibleMinimal, OpenProblem };

std::string to_string(Verdict v);

struct SpectralExclusionCertificate {
    RatPoly q;  // roots-of-unity part of the minimal polynomial
    RatPoly r;  // remainder
    RootCensus r_census;
};

struct SpectralReport {
    RatPoly char_p;
    RatPoly min_p;
    bool quasi_unipotent = false;
    std::optional<Int> qu_order;
    RootCensus census;
    bool has_eigenvalue_one = false;
    bool spectrally_obstructed = false;
    std::optional<SpectralExclusionCertificate> spectral_certificate;
    Verdict verdict = Verdict::OpenProblem;
};

// flag true iff all eigenvalues are roots of unity; when true, qu_order is
// the least m with (L^m - I)^n = 0.
std::pair<bool, std::optional<Int>> quasi_unipotent_test(const IntMatrix& l);

// p = q_cyc * r_rest with q_cyc carrying every root-of-unity factor (full
// multiplicity) and r_rest free of roots of unity.
std::pair<RatPoly, RatPoly> cyclotomic_split(const RatPoly& p, int n);

RootCensus root_census(const RatPoly& p, unsigned bits = 256, unsigned max_bits = 4096);

Int lefschetz_number(const IntMatrix& l);

std::pair<bool, SpectralExclusionCertificate> spectral_exclusion(const IntMatrix& l);

SpectralReport classify(const IntMatrix& l);

}  // namespace torusmin
