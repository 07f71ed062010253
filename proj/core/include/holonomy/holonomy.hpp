#pragma once

#include "holonomy/algebra.hpp"
#include "holonomy/errors.hpp"
#include "holonomy/geometry.hpp"
#include "holonomy/io.hpp"
#include "holonomy/npc.hpp"
#include "holonomy/random.hpp"
#include "holonomy/states.hpp"
#include "holonomy/surface.hpp"
#include "holonomy/transport.hpp"
