#pragma once
// Convenience umbrella for the whole library.

#include "qmetro/channels.hpp"
#include "qmetro/fock.hpp"
#include "qmetro/metrology.hpp"
#include "qmetro/states.hpp"
#include "qmetro/sweep.hpp"
