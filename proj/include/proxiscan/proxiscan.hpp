#pragma once

// Umbrella header for the proxiscan library.

#include "proxiscan/dataset.hpp"
#include "proxiscan/detection.hpp"
#include "proxiscan/fcm.hpp"
#include "proxiscan/manifest.hpp"
#include "proxiscan/metric.hpp"
#include "proxiscan/proximity.hpp"
#include "proxiscan/report.hpp"
