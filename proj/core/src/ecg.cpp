// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0
