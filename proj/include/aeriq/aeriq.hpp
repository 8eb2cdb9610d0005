#pragma once

#include "aeriq/chanest.hpp"
#include "aeriq/error.hpp"
#include "aeriq/geo.hpp"
#include "aeriq/lte_phy.hpp"
#include "aeriq/pipeline.hpp"
#include "aeriq/propmodel.hpp"
#include "aeriq/records.hpp"
#include "aeriq/resample.hpp"
#include "aeriq/sigmf_io.hpp"
#include "aeriq/synth.hpp"
#include "aeriq/sync.hpp"
