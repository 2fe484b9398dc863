#pragma once

#include "scan.hpp"
