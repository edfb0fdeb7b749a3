#pragma once

#include "otelbaev/errors.hpp"
#include "otelbaev/measure.hpp"
#include "otelbaev/measure_io.hpp"
#include "otelbaev/qstar.hpp"
#include "otelbaev/quadrature.hpp"
#include "otelbaev/profile.hpp"
#include "otelbaev/envelope.hpp"
#include "otelbaev/corpus.hpp"
#include "otelbaev/decomposition.hpp"
#include "otelbaev/refsolver.hpp"
#include "otelbaev/bounds.hpp"
#include "otelbaev/comparison.hpp"
#include "otelbaev/closed_forms.hpp"
#include "otelbaev/scenario.hpp"
