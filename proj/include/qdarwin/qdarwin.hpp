#pragma once

#include "qdarwin/error.hpp"
#include "qdarwin/numerics.hpp"
#include "qdarwin/registers.hpp"
#include "qdarwin/gates.hpp"
#include "qdarwin/channel.hpp"
#include "qdarwin/attractor.hpp"
#include "qdarwin/darwinism.hpp"
#include "qdarwin/zurek.hpp"
