#ifndef SCHROEDER_SCHROEDER_HPP
#define SCHROEDER_SCHROEDER_HPP

#include <schroeder/comp_operator.hpp>
#include <schroeder/engine.hpp>
#include <schroeder/errors.hpp>
#include <schroeder/incremental.hpp>
#include <schroeder/jet.hpp>
#include <schroeder/jordan.hpp>
#include <schroeder/matrix.hpp>
#include <schroeder/monomial.hpp>
#include <schroeder/poly_map.hpp>
#include <schroeder/scalar.hpp>

#endif
