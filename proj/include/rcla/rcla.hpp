#pragma once

#include <rcla/autoselect.hpp>
#include <rcla/beta.hpp>
#include <rcla/bottleneck.hpp>
#include <rcla/experiment.hpp>
#include <rcla/features.hpp>
#include <rcla/grid.hpp>
#include <rcla/io.hpp>
#include <rcla/neighbors.hpp>
#include <rcla/persistence.hpp>
#include <rcla/point_cloud.hpp>
#include <rcla/poisson.hpp>
#include <rcla/reduction.hpp>
#include <rcla/stats.hpp>
#include <rcla/synth.hpp>
#include <rcla/union_find.hpp>
