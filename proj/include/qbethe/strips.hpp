/// @file strips.hpp
/// Horizontal-strip (interleaving) relations between partitions and the
/// phi / psi multiplicity weights attached to them.
#pragma once

#include <utility>
#include <vector>

#include "qbethe/fock.hpp"

namespace qbethe {

/// mu precedes lambda: lambda_1 >= mu_1 >= lambda_2 >= ... with mu of length
/// len(lambda) or len(lambda) - 1.
bool precedes(const Partition& mu, const Partition& lambda);

/// All nu of the given length with nu precedes lambda (length is len(lambda) or len(lambda)-1).
std::vector<Partition> strips_below(const Partition& lambda, int length);
/// All lambda in Lambda_{length,m} with mu precedes lambda (length is len(mu) or len(mu)+1).
std::vector<Partition> strips_above(const Partition& mu, int length, int m);

/// Product over sites whose multiplicity grows by one from mu to lambda of (1 - t^{m_l(lambda)}).
double phi_weight(const Partition& lambda, const Partition& mu, double t);
/// Product over sites whose multiplicity drops by one from mu to lambda of (1 - t^{m_l(mu)}).
double psi_weight(const Partition& lambda, const Partition& mu, double t);
/// (phi, psi) for lambda over mu; throws unless mu precedes lambda.
std::pair<double, double> phi_psi(const Partition& lambda, const Partition& mu, double t);

enum class StripRelation {
  precede,    // mu precedes lambda
  le,         // mu <= lambda: a chain mu precedes nu precedes lambda exists
  sim_minus,  // a common nu below both
  sim_plus,   // a common nu above both
};

/// Whether `mu` stands in relation `kind` to `lambda` inside Lambda_{., m}.
bool strip_related(StripRelation kind, const Partition& mu, const Partition& lambda, int m);

}  // namespace qbethe
