#pragma once

#include <stdexcept>
#include <string>

namespace singsys {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pencil matrices have mismatched shapes or non-finite entries.
class InvalidPencil : public Error {
public:
    using Error::Error;
};

class NonSquarePencil : public Error {
public:
    using Error::Error;
};

class IrregularPencil : public Error {
public:
    using Error::Error;
};

/// A computed decomposition or interpolation is too ill-conditioned to trust.
class NumericalBreakdown : public Error {
public:
    using Error::Error;
};

/// Jordan chains longer than the decomposition supports (see weierstrass_decompose).
class UnsupportedJordanStructure : public Error {
public:
    using Error::Error;
};

/// An input V_k was requested outside the advertised support of the sequence.
class MissingInput : public Error {
public:
    using Error::Error;
};

class InconsistentIC : public Error {
public:
    using Error::Error;
};

class InvalidParameters : public Error {
public:
    using Error::Error;
};

class InsufficientExpenditureData : public Error {
public:
    using Error::Error;
};

}  // namespace singsys
