#pragma once

#include <stdexcept>
#include <string>

namespace atlas {

// Base class of all domain errors thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define ATLAS_DEFINE_ERROR(Name)                                          \
    struct Name : Error {                                                 \
        explicit Name(const std::string& what) : Error(what) {}           \
    }

ATLAS_DEFINE_ERROR(BadInput);
ATLAS_DEFINE_ERROR(NotSquarefree);
ATLAS_DEFINE_ERROR(InvalidDiscriminant);
ATLAS_DEFINE_ERROR(InternalInconsistency);
ATLAS_DEFINE_ERROR(GenusTooSmall);
ATLAS_DEFINE_ERROR(UnsupportedInput);
ATLAS_DEFINE_ERROR(BadPrime);
ATLAS_DEFINE_ERROR(WrongShape);
ATLAS_DEFINE_ERROR(TorsionPresent);
ATLAS_DEFINE_ERROR(NotInvolution);
ATLAS_DEFINE_ERROR(NotGenusOne);
ATLAS_DEFINE_ERROR(ParseError);
ATLAS_DEFINE_ERROR(DuplicateLabel);
ATLAS_DEFINE_ERROR(BadReduction);
ATLAS_DEFINE_ERROR(NotMultiplicative);
ATLAS_DEFINE_ERROR(AmbiguousClass);
ATLAS_DEFINE_ERROR(MissingConductor);

#undef ATLAS_DEFINE_ERROR

}  // namespace atlas
