#include "zeta_ladder/error.hpp"

namespace zeta_ladder {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::domain: return "domain";
        case ErrorKind::cache_exhausted: return "cache-exhausted";
        case ErrorKind::below_threshold: return "below-threshold";
        case ErrorKind::convergence: return "convergence";
        case ErrorKind::accuracy: return "accuracy";
        case ErrorKind::evaluation: return "evaluation";
        case ErrorKind::singular_point: return "singular-point";
        case ErrorKind::consistency: return "consistency";
        case ErrorKind::root: return "root";
        case ErrorKind::storage: return "storage";
        case ErrorKind::checksum: return "checksum";
    }
    return "unknown";
}

}  // namespace zeta_ladder
