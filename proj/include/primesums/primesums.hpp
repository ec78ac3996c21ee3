#pragma once
// Umbrella header: sums of consecutive primes — tables, searches, heuristics.

#include <primesums/primality.hpp>
#include <primesums/prime_table.hpp>
#include <primesums/sums.hpp>
#include <primesums/search.hpp>
#include <primesums/checkpoint.hpp>
#include <primesums/verify.hpp>
#include <primesums/records.hpp>
#include <primesums/heuristics.hpp>
#include <primesums/modular.hpp>
#include <primesums/sha256.hpp>
#include <primesums/report.hpp>
