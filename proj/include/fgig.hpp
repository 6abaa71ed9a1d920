#ifndef FGIG_HPP
#define FGIG_HPP

#include "fgig/numeric.hpp"
#include "fgig/series.hpp"
#include "fgig/params.hpp"
#include "fgig/measures.hpp"
#include "fgig/transforms.hpp"
#include "fgig/levy.hpp"
#include "fgig/convolution.hpp"
#include "fgig/characterization.hpp"
#include "fgig/asymptotics.hpp"
#include "fgig/entropy.hpp"

#endif  // FGIG_HPP
