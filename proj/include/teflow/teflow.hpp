#pragma once

#include "teflow/commands.hpp"
#include "teflow/config.hpp"
#include "teflow/entropy.hpp"
#include "teflow/export.hpp"
#include "teflow/flow.hpp"
#include "teflow/inference.hpp"
#include "teflow/ingest.hpp"
#include "teflow/rng.hpp"
#include "teflow/symbolize.hpp"
