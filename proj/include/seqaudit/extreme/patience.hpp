#pragma once

#include <limits>
#include <stdexcept>

namespace seqaudit {

// Patience counter gating the pruning events: fires after alpha consecutive
// epochs whose loss fails to improve on the best seen by more than omega.
struct PatienceState {
    double best_loss = std::numeric_limits<double>::infinity();
    int stall_count = 0;
    int alpha = 1;        // patience value
    double omega = 0.0;   // minimum improvement that counts

    PatienceState() = default;
    PatienceState(int alpha_, double omega_) : alpha(alpha_), omega(omega_) {
        if (alpha < 1) throw std::invalid_argument("patience alpha must be >= 1");
        if (omega < 0.0) throw std::invalid_argument("patience omega must be >= 0");
    }
};

// Returns true exactly when the stall counter reaches alpha; the counter then
// resets while best_loss is retained, so consecutive triggers are at least
// alpha calls apart.
inline bool patience_step(PatienceState& state, double current_loss) {
    if (state.best_loss - current_loss > state.omega) {
        state.best_loss = current_loss;
        state.stall_count = 0;
        return false;
    }
    ++state.stall_count;
    if (state.stall_count >= state.alpha) {
        state.stall_count = 0;
        return true;
    }
    return false;
}

}  // namespace seqaudit
