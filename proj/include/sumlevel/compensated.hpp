#pragma once

#include <cmath>

namespace sumlevel {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    void merge(const CompensatedSum& other) {
        add(other.sum_);
        add(other.comp_);
    }

    double value() const { return sum_ + comp_; }
    double raw_sum() const { return sum_; }
    double compensation() const { return comp_; }

    static CompensatedSum from_parts(double sum, double comp) {
        CompensatedSum s;
        s.sum_ = sum;
        s.comp_ = comp;
        return s;
    }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace sumlevel
