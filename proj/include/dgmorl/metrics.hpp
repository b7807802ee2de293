#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dgmorl/types.hpp"

namespace dgmorl {

/// Append-only line-delimited training log. All numbers are decimal text with
/// 17 significant digits so identical runs produce byte-identical logs.
class MetricsLog {
public:
    struct EvalRecord {
        std::uint64_t global_step = 0;
        std::uint64_t eval_step = 0;
        double eu = 0.0;
        std::size_t ccs_size = 0;
        std::size_t active_demos = 0;
        std::string w_c;
        int h_final = 0;
        double beta = 0.0;
        int round = 0;
    };

    struct CornerRecord {
        int round = 0;
        std::string w;
        double max_demo_utility = 0.0;
    };

    void header(const std::string& env_id, std::uint64_t seed);
    void eval(const EvalRecord& r);
    void corner(const CornerRecord& r);
    void round_start(int round, const std::string& w_c, std::uint64_t guide_id, double u_theta,
                     double beta);
    void rollback(int round, int h_from, int h_to, double u, double u_theta, double beta);
    void absorbed(int round, std::uint64_t demo_id, bool active);
    void summary(std::uint64_t global_step, std::uint64_t eval_step, double final_eu, int rounds,
                 std::size_t ccs_size, std::size_t active_demos);

    const std::vector<std::string>& lines() const { return lines_; }
    std::string text() const;
    void save(const std::string& path) const;

    /// Eval records parsed back out of a serialized log.
    static std::vector<EvalRecord> parse_evals(const std::string& text);
    static std::vector<CornerRecord> parse_corners(const std::string& text);

private:
    std::vector<std::string> lines_;
};

} // namespace dgmorl
