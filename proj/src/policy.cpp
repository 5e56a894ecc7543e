#include "acmdp/policy.hpp"

namespace acmdp {

std::string to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::Stationary:
            return "stationary";
        case PolicyKind::SemiStationary:
            return "semi-stationary";
        case PolicyKind::Markov:
            return "markov";
        case PolicyKind::SemiMarkov:
            return "semi-markov";
        case PolicyKind::HistoryFiniteHorizon:
            return "history";
    }
    return "unknown";
}

}  // namespace acmdp
