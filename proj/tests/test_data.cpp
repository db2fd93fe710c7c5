// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
