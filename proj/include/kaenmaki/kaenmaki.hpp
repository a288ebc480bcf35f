#pragma once

#include "kaenmaki/coding.hpp"
#include "kaenmaki/dimension.hpp"
#include "kaenmaki/error.hpp"
#include "kaenmaki/ifs.hpp"
#include "kaenmaki/parallel.hpp"
#include "kaenmaki/perron.hpp"
#include "kaenmaki/projection.hpp"
#include "kaenmaki/report.hpp"
#include "kaenmaki/sampling.hpp"
#include "kaenmaki/strip.hpp"
#include "kaenmaki/thermo.hpp"
#include "kaenmaki/verify.hpp"
#include "kaenmaki/word.hpp"
