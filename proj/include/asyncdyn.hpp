#ifndef ASYNCDYN_HPP
#define ASYNCDYN_HPP

#include "asyncdyn/state.hpp"
#include "asyncdyn/core.hpp"
#include "asyncdyn/netio.hpp"
#include "asyncdyn/schedule.hpp"
#include "asyncdyn/flow.hpp"
#include "asyncdyn/portrait.hpp"
#include "asyncdyn/analysis.hpp"

#endif // ASYNCDYN_HPP
