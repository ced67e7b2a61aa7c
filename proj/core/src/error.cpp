#include "qpmut/error.hpp"

namespace qpmut {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::NotACycle: return "not_a_cycle";
    case ErrorKind::VertexAbsent: return "vertex_absent";
    case ErrorKind::ArrowAbsent: return "arrow_absent";
    case ErrorKind::EndpointMismatch: return "endpoint_mismatch";
    case ErrorKind::MutationUndefined: return "mutation_undefined";
    case ErrorKind::NotHomogeneous: return "not_homogeneous";
    case ErrorKind::NonPositiveGrading: return "non_positive_grading";
    case ErrorKind::LoopsNotRemovable: return "loops_not_removable";
    case ErrorKind::Parse: return "parse_error";
  }
  return "unknown";
}

}  // namespace qpmut
