#pragma once

#include "sphere_dubins/tolerances.hpp"
#include "sphere_dubins/geometry.hpp"
#include "sphere_dubins/solvers.hpp"
#include "sphere_dubins/planner.hpp"
#include "sphere_dubins/oracle.hpp"
#include "sphere_dubins/analysis.hpp"
#include "sphere_dubins/verify.hpp"
