// Copyright (c) 2026 The sbnb authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sbnb/bnb.hpp"
#include "sbnb/cli.hpp"
#include "sbnb/convex.hpp"
#include "sbnb/dc.hpp"
#include "sbnb/generator.hpp"
#include "sbnb/instance.hpp"
#include "sbnb/io.hpp"
#include "sbnb/jacobi.hpp"
#include "sbnb/lp.hpp"
#include "sbnb/oracle.hpp"
#include "sbnb/relaxation.hpp"
#include "sbnb/simplex.hpp"
#include "sbnb/types.hpp"
