#pragma once

#include <stdexcept>
#include <string>

namespace curverec {

// Base of every failure the library reports. kind() is a short stable tag
// used by the CLI for its one-line error reason.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define CURVEREC_ERROR(Name, tag)                                             \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& what) : Error(tag, what) {}          \
    };

CURVEREC_ERROR(ParallelError, "parallel")
CURVEREC_ERROR(RangeError, "range")
CURVEREC_ERROR(DegenerateError, "degenerate")
CURVEREC_ERROR(PreconditionError, "precondition")
CURVEREC_ERROR(DomainError, "domain")
CURVEREC_ERROR(InsufficientFramesError, "insufficient_frames")
CURVEREC_ERROR(BranchConflictError, "branch_conflict")
CURVEREC_ERROR(PoleError, "pole")
CURVEREC_ERROR(UnderdeterminedError, "underdetermined")
CURVEREC_ERROR(RankDeficientError, "rank_deficient")
CURVEREC_ERROR(CoplanarError, "coplanar")
CURVEREC_ERROR(NoIntersectionError, "no_intersection")
CURVEREC_ERROR(AmbiguityError, "ambiguity")
CURVEREC_ERROR(CollinearityError, "collinearity")
CURVEREC_ERROR(FormatError, "format")

#undef CURVEREC_ERROR

}  // namespace curverec
