#pragma once

#include <stdexcept>
#include <string>

namespace orthocone {

// All library failures derive from this so callers can map them to exit codes.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define ORTHOCONE_ERROR(name)                        \
    class name : public error {                      \
    public:                                          \
        explicit name(const std::string& what)       \
            : error(std::string(#name ": ") + what) {} \
    }

ORTHOCONE_ERROR(InvalidParams);
ORTHOCONE_ERROR(ZeroParameter);
ORTHOCONE_ERROR(InvalidIntermediateParams);
ORTHOCONE_ERROR(QuadratureFailure);
ORTHOCONE_ERROR(DomainTooLarge);
ORTHOCONE_ERROR(NonPositiveArgument);
ORTHOCONE_ERROR(EmptySubset);
ORTHOCONE_ERROR(InvalidSubset);
ORTHOCONE_ERROR(NonPositiveTau);
ORTHOCONE_ERROR(NuEqualsOne);
ORTHOCONE_ERROR(DegenerateVertices);
ORTHOCONE_ERROR(FaceOutOfRange);
ORTHOCONE_ERROR(CombinatorialBudgetExceeded);
ORTHOCONE_ERROR(CholeskyFailure);
ORTHOCONE_ERROR(SingularGenerators);
ORTHOCONE_ERROR(ProjectionNonConvergence);

#undef ORTHOCONE_ERROR

}  // namespace orthocone
