#ifndef SCHROEDER_ERRORS_HPP
#define SCHROEDER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace schroeder
{

// Root of everything the library throws on bad input or violated preconditions.
class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class dimension_mismatch : public error
{
public:
    using error::error;
};

class division_by_zero : public error
{
public:
    division_by_zero() : error("division by zero") {}
    using error::error;
};

class singular_matrix : public error
{
public:
    using error::error;
};

// Eigenvalue of the linear part outside the punctured open unit disk.
class unsupported_spectrum : public error
{
public:
    using error::error;
};

class precondition_violation : public error
{
public:
    using error::error;
};

// One of the standing hypotheses on the map fails (phi(0) != 0, singular
// linear part, non-triangular linear part without a conjugator).
class invalid_map : public error
{
public:
    using error::error;
};

class parse_error : public error
{
public:
    using error::error;
};

} // namespace schroeder

#endif
