#ifndef COLLMEM_COLLMEM_HPP
#define COLLMEM_COLLMEM_HPP

#include "collmem/error.hpp"
#include "collmem/modes.hpp"
#include "collmem/hilbert.hpp"
#include "collmem/dynamics.hpp"
#include "collmem/fidelity.hpp"
#include "collmem/io.hpp"
#include "collmem/sweep.hpp"

#endif  // COLLMEM_COLLMEM_HPP
