#pragma once

#include "facpca/error.hpp"
#include "facpca/factor_model.hpp"
#include "facpca/jacobi.hpp"
#include "facpca/pca.hpp"
#include "facpca/retention.hpp"
#include "facpca/stats.hpp"
#include "facpca/varimax.hpp"
