// Copyright (c) The hhekit Authors.
// SPDX-License-Identifier: Apache-2.0

int main() { return 0; }
