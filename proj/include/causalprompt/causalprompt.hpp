#pragma once

// Umbrella header: the whole library. Individual headers stay usable on
// their own; pipeline.hpp (and therefore the HTTP stack) is included here
// too, so prefer picking headers à la carte in build-time-sensitive code.

#include "causalprompt/analysis.hpp"
#include "causalprompt/dataset.hpp"
#include "causalprompt/digest.hpp"
#include "causalprompt/error.hpp"
#include "causalprompt/extract.hpp"
#include "causalprompt/gateway.hpp"
#include "causalprompt/ir.hpp"
#include "causalprompt/metrics.hpp"
#include "causalprompt/pipeline.hpp"
#include "causalprompt/program.hpp"
#include "causalprompt/random.hpp"
#include "causalprompt/render.hpp"
#include "causalprompt/text.hpp"
#include "causalprompt/variants.hpp"
#include "causalprompt/version.hpp"
#include "causalprompt/wellformed.hpp"
