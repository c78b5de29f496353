#pragma once

#include "coarsedim/core/errors.hpp"
#include "coarsedim/core/parallel.hpp"
#include "coarsedim/core/rational.hpp"
#include "coarsedim/core/union_find.hpp"
#include "coarsedim/metric/space.hpp"
#include "coarsedim/metric/components.hpp"
#include "coarsedim/metric/control.hpp"
#include "coarsedim/group/table.hpp"
#include "coarsedim/group/word_norm.hpp"
#include "coarsedim/group/chain.hpp"
#include "coarsedim/group/adversarial.hpp"
#include "coarsedim/direct_sum/direct_sum.hpp"
#include "coarsedim/direct_sum/pullback.hpp"
#include "coarsedim/covers/lattice.hpp"
#include "coarsedim/covers/reflection.hpp"
#include "coarsedim/covers/cube.hpp"
#include "coarsedim/covers/report.hpp"
#include "coarsedim/cone/shadows.hpp"
#include "coarsedim/wreath/free_group.hpp"
#include "coarsedim/wreath/lamplighter.hpp"
#include "coarsedim/wreath/kernel.hpp"
