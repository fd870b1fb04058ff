#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace horocount::acceptance {

/// quick: reduced sample sizes and radii (selftest); full: the published targets.
enum class Scale { quick, full };

struct CriterionResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct Criterion {
    std::string name;
    std::function<CriterionResult(Scale, unsigned threads)> run;
};

std::vector<Criterion> criteria();

/// Runs every criterion, printing one PASS/FAIL line each to `out`.
std::vector<CriterionResult> run_all(Scale scale, unsigned threads, std::ostream& out);

/// min over x of sqrt(2)·log σ_1(g·[[1,x],[0,1]]): the N = 2 height as a
/// distance minimisation, independent of any decomposition.
double geodesic_height_n2(double g00, double g01, double g10, double g11);

} // namespace horocount::acceptance
