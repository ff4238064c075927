#ifndef DFD_DFD_HPP
#define DFD_DFD_HPP

#include "dfd/bisubmodular.hpp"
#include "dfd/core.hpp"
#include "dfd/fenchel.hpp"
#include "dfd/fixtures.hpp"
#include "dfd/generators.hpp"
#include "dfd/integral_convexity.hpp"
#include "dfd/rational_fm.hpp"
#include "dfd/separable.hpp"
#include "dfd/simplex.hpp"
#include "dfd/subdifferential.hpp"
#include "dfd/table_function.hpp"

#endif  // DFD_DFD_HPP
