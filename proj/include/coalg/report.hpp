#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace coalg {

/// Outcome of one checker run. A report passes exactly when it carries no
/// witness; witnesses locate the first offending (context, element, residual)
/// triples so sign errors can be traced.
struct Witness {
    std::string location;
    std::string residual;
};

struct Report {
    std::string check;
    std::string params;
    std::vector<Witness> witnesses;
    std::vector<std::string> notes;
    double millis = 0.0;

    bool pass() const { return witnesses.empty(); }
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        auto d = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(d).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace coalg
