#pragma once

#include "digitop/error.hpp"
#include "digitop/rational.hpp"
#include "digitop/lattice.hpp"
#include "digitop/metrics.hpp"
#include "digitop/maps.hpp"
#include "digitop/closed_form.hpp"
#include "digitop/classifiers.hpp"
#include "digitop/compatibility.hpp"
#include "digitop/catalog.hpp"
#include "digitop/io.hpp"
#include "digitop/parallel.hpp"
#include "digitop/verifiers.hpp"
#include "digitop/registry.hpp"
#include "digitop/falsify.hpp"
