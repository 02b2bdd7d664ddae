use sha2::{Digest, Sha256};

use crate::stream::{ground_truth, Report, StreamState};

/// One adversary move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    Update(u64, i64),
    Query,
    Stop,
}

pub trait Adversary {
    fn name(&self) -> &str;

    /// Chooses the next move from the full revealed state and the response
    /// to the previous query, if any.
    fn next_move(&mut self, revealed: &[u8], last: Option<&Report>) -> Move;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    pub action: Move,
    /// SHA-256 of the state revealed before the move.
    pub state_hash: [u8; 32],
    pub response: Option<Report>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GameOutcome {
    pub rounds: usize,
    pub queries: usize,
    pub bottoms: usize,
    pub incorrect_responses: usize,
    /// Out-of-range updates, refused by the algorithm and ignored by the truth.
    pub invalid_updates: usize,
    /// The round budget ran out before the adversary stopped.
    pub truncated: bool,
    pub transcript: Vec<RoundRecord>,
    /// Ground truth at the end of the game.
    pub final_truth: Option<Report>,
}

/// Plays the game: reveal, move, apply, and on queries compare the response
/// with `f_n(x)` for the accumulated `x`.
pub fn play(
    state: &mut StreamState,
    adversary: &mut dyn Adversary,
    max_rounds: usize,
) -> GameOutcome {
    let n = state.params().n;
    let k = state.params().k;
    let mut x = vec![0i64; n as usize];
    let mut out = GameOutcome::default();
    let mut last: Option<Report> = None;
    loop {
        let revealed = state.to_bytes();
        let state_hash: [u8; 32] = Sha256::digest(&revealed).into();
        let action = adversary.next_move(&revealed, last.as_ref());
        if action == Move::Stop {
            break;
        }
        if out.rounds == max_rounds {
            out.truncated = true;
            break;
        }
        out.rounds += 1;
        let mut response = None;
        match action {
            Move::Update(i, d) => {
                if state.update(i, d).is_ok() {
                    x[(i - 1) as usize] += d;
                } else {
                    out.invalid_updates += 1;
                }
            }
            Move::Query => {
                let r = state.report();
                out.queries += 1;
                if r.is_bottom() {
                    out.bottoms += 1;
                }
                if r != ground_truth(&x, k) {
                    out.incorrect_responses += 1;
                }
                last = Some(r.clone());
                response = Some(r);
            }
            Move::Stop => unreachable!(),
        }
        out.transcript.push(RoundRecord {
            action,
            state_hash,
            response,
        });
    }
    out.final_truth = Some(ground_truth(&x, k));
    out
}
