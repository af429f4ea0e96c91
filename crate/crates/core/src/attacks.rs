//! Conjugacy-search solvers: breadth-first brute-force enumeration, a
//! length-based beam heuristic, and their deterministic step-interleaved
//! composite, plus witness verification and transcript replay.
//!
//! Both solvers are explicit state machines advanced one elementary step at a
//! time (one candidate test for the enumerator, one neighbor scoring for the
//! heuristic), which is what makes the composite race deterministic and its
//! step accounting exact.

use crate::error::{Error, Result};
use crate::platform::{Element, Platform};
use crate::protocols::{derive_key, derived_rng, Key, ProtocolTag, Transcript};
use crate::words::{Letter, Word};
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use serde_json::json;
use std::collections::VecDeque;
use std::time::{Duration, Instant};

/// One or more pairs `(a_i, b_i)` with a common conjugator promised to exist
/// when `promised` is set.
#[derive(Debug, Clone)]
pub struct ConjugacyInstance {
    pub platform: Platform,
    pub pairs: Vec<(Word, Word)>,
    pub promised: bool,
    /// The `n` of complexity accounting: the hidden conjugator length for
    /// generated instances, otherwise the longest word in the instance.
    pub instance_length: usize,
    /// Conjugator search basis. `None` searches words over the platform
    /// generators; `Some(words)` searches the subgroup they generate, as an
    /// attacker does against AAG where the conjugator is a word in the
    /// published opposite tuple.
    pub basis: Option<Vec<Word>>,
}

impl ConjugacyInstance {
    pub fn new(platform: Platform, pairs: Vec<(Word, Word)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyInstance);
        }
        for (a, b) in &pairs {
            platform.element(a)?;
            platform.element(b)?;
        }
        let instance_length = pairs.iter().map(|(a, b)| a.len().max(b.len())).max().unwrap();
        Ok(ConjugacyInstance {
            platform,
            pairs,
            promised: false,
            instance_length,
            basis: None,
        })
    }

    pub fn promised(mut self, hidden_length: usize) -> Self {
        self.promised = true;
        self.instance_length = hidden_length;
        self
    }

    /// Mark a conjugator as promised without knowing its length, as an
    /// eavesdropper does; accounting keeps the instance word length.
    pub fn promised_unknown(mut self) -> Self {
        self.promised = true;
        self
    }

    pub fn with_basis(mut self, basis: Vec<Word>) -> Self {
        self.basis = Some(basis);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverTag {
    Heuristic,
    Deterministic,
    CompositeH,
    CompositeD,
}

impl SolverTag {
    pub fn label(self) -> &'static str {
        match self {
            SolverTag::Heuristic => "heuristic",
            SolverTag::Deterministic => "deterministic",
            SolverTag::CompositeH => "composite-H",
            SolverTag::CompositeD => "composite-D",
        }
    }
}

#[derive(Debug, Clone)]
pub struct AttackOutcome {
    pub witness: Option<Word>,
    pub solver: SolverTag,
    /// Elementary solver steps: candidate tests plus neighbor scorings.
    pub steps: u64,
    pub elapsed: Duration,
    pub budget_exhausted: bool,
}

/// Budgets and knobs shared by all solvers.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Longest conjugator the enumerator will reach.
    pub max_depth: usize,
    /// Elementary-step budget per solver invocation.
    pub max_steps: u64,
    pub beam_width: usize,
    /// Randomized heuristic restarts allowed after a score plateau.
    pub restarts: usize,
    /// Heuristic steps advanced per deterministic step in the composite.
    pub interleave_ratio: u32,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_depth: 6,
            max_steps: 1_000_000,
            beam_width: 8,
            restarts: 3,
            interleave_ratio: 4,
            seed: 0,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if self.beam_width == 0 || self.interleave_ratio == 0 || self.max_steps == 0 {
            return Err(Error::InvalidConfig(
                "solver budgets and widths must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    BruteForce,
    LengthBased,
    Composite,
}

impl SolverKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "bf" | "brute-force" => Ok(SolverKind::BruteForce),
            "lba" | "length-based" => Ok(SolverKind::LengthBased),
            "composite" => Ok(SolverKind::Composite),
            other => Err(Error::InvalidConfig(format!("unknown solver `{other}`"))),
        }
    }
}

/// True iff `x` conjugates every `a_i` to `b_i`.
pub fn verify_witness(inst: &ConjugacyInstance, x: &Word) -> Result<bool> {
    for (a, b) in &inst.pairs {
        if !inst
            .platform
            .equal(&a.conjugated_by(x), b)?
        {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Shared solver scaffolding
// ---------------------------------------------------------------------------

/// Signed step alphabet the conjugator is searched over. Slot `2i` is the
/// i-th basis word, slot `2i+1` its inverse; a sequence of slots is freely
/// reduced when no slot follows its own pair.
struct StepBasis {
    words: Vec<Word>,
    elements: Vec<Element>,
}

impl StepBasis {
    fn new(platform: Platform, basis: Option<&[Word]>) -> Result<StepBasis> {
        let base_words: Vec<Word> = match basis {
            Some(words) => words.to_vec(),
            None => (1..=platform.alphabet_size())
                .map(|i| Word::generator(i, platform.alphabet_size()))
                .collect::<Result<_>>()?,
        };
        if base_words.is_empty() {
            return Err(Error::EmptyGeneratorPool { role: "solver" });
        }
        let mut words = Vec::with_capacity(base_words.len() * 2);
        let mut elements = Vec::with_capacity(base_words.len() * 2);
        for w in &base_words {
            let el = platform.element(w)?;
            words.push(w.clone());
            elements.push(el.clone());
            words.push(w.invert());
            elements.push(el.inverse());
        }
        Ok(StepBasis { words, elements })
    }

    fn len(&self) -> usize {
        self.words.len()
    }

    fn word_of_slots(&self, slots: &[usize]) -> Word {
        let mut out = match self.words.first() {
            Some(w) => Word::empty(w.alphabet_size()),
            None => Word::empty(0),
        };
        for &s in slots {
            out = out.concat(&self.words[s]);
        }
        out.free_reduce()
    }
}

#[inline]
fn cancels(slot: usize, other: usize) -> bool {
    slot ^ 1 == other
}

struct Prepared {
    platform: Platform,
    pairs: Vec<(Element, Element)>,
    /// Sum of canonical lengths of the `a_i`: the score a correct conjugator
    /// prefix reaches.
    target: usize,
    steps: StepBasis,
}

impl Prepared {
    fn new(inst: &ConjugacyInstance) -> Result<Prepared> {
        let pairs = inst
            .pairs
            .iter()
            .map(|(a, b)| Ok((inst.platform.element(a)?, inst.platform.element(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let target = pairs.iter().map(|(a, _)| a.canonical_len()).sum();
        Ok(Prepared {
            platform: inst.platform,
            pairs,
            target,
            steps: StepBasis::new(inst.platform, inst.basis.as_deref())?,
        })
    }

    /// Exact check at the element level: `x a_i x⁻¹ = b_i` for all pairs.
    fn solves(&self, x: &Element, x_inv: &Element) -> bool {
        self.pairs
            .iter()
            .all(|(a, b)| x.mul(a).mul(x_inv) == *b)
    }

    /// Total canonical length of the pair set pulled back through `x`:
    /// `Σ |x⁻¹ b_i x|`. Reaches `target` exactly when the pullback equals
    /// the `a_i` side up to length, and the descent signal of the attack.
    fn score(&self, x: &Element, x_inv: &Element) -> usize {
        self.pairs
            .iter()
            .map(|(_, b)| x_inv.mul(b).mul(x).canonical_len())
            .sum()
    }
}

enum Poll {
    Found(Vec<usize>),
    Continue,
    Exhausted,
}

// ---------------------------------------------------------------------------
// Deterministic enumerator
// ---------------------------------------------------------------------------

/// Breadth-first candidate enumeration: freely reduced slot sequences ordered
/// by length, lexicographic within a length. One step tests one candidate.
struct BruteForce<'a> {
    prep: &'a Prepared,
    max_depth: usize,
    level: usize,
    slots: Vec<usize>,
    fresh_level: bool,
    pub steps: u64,
    done: bool,
}

impl<'a> BruteForce<'a> {
    fn new(prep: &'a Prepared, cfg: &SolverConfig) -> Self {
        BruteForce {
            prep,
            max_depth: cfg.max_depth,
            level: 0,
            slots: Vec::new(),
            fresh_level: true,
            steps: 0,
            done: false,
        }
    }

    fn first_slots(&self, len: usize) -> Vec<usize> {
        let mut slots = Vec::with_capacity(len);
        for k in 0..len {
            let banned = if k == 0 { usize::MAX } else { slots[k - 1] ^ 1 };
            slots.push(if banned == 0 { 1 } else { 0 });
        }
        slots
    }

    /// Advance to the next reduced sequence of the current length.
    fn advance(&mut self) -> bool {
        let count = self.prep.steps.len();
        let len = self.slots.len();
        if len == 0 {
            return false;
        }
        let mut i = len - 1;
        loop {
            self.slots[i] += 1;
            while self.slots[i] < count && i > 0 && cancels(self.slots[i], self.slots[i - 1]) {
                self.slots[i] += 1;
            }
            if self.slots[i] < count {
                for k in i + 1..len {
                    let banned = self.slots[k - 1] ^ 1;
                    self.slots[k] = if banned == 0 { 1 } else { 0 };
                }
                return true;
            }
            if i == 0 {
                return false;
            }
            i -= 1;
        }
    }

    fn step(&mut self) -> Poll {
        if self.done {
            return Poll::Exhausted;
        }
        // Move to the candidate to test.
        if self.fresh_level {
            self.fresh_level = false;
        } else if !self.advance() {
            loop {
                self.level += 1;
                if self.level > self.max_depth {
                    self.done = true;
                    return Poll::Exhausted;
                }
                self.slots = self.first_slots(self.level);
                if !self.slots.is_empty() || self.level == 0 {
                    break;
                }
            }
        }
        self.steps += 1;
        let x = self.element_of_current();
        let x_inv = x.inverse();
        if self.prep.solves(&x, &x_inv) {
            self.done = true;
            return Poll::Found(self.slots.clone());
        }
        Poll::Continue
    }

    fn element_of_current(&self) -> Element {
        let mut x = self.prep.platform.identity();
        for &s in &self.slots {
            x = x.mul(&self.prep.steps.elements[s]);
        }
        x
    }
}

// ---------------------------------------------------------------------------
// Length-based heuristic
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct Candidate {
    slots: Vec<usize>,
    el: Element,
    inv: Element,
    score: usize,
}

/// Greedy descent with beam search over conjugator prefixes. Neighbors extend
/// the prefix by one signed step; only strictly score-decreasing children
/// survive, and a plateau triggers a seeded randomized restart. One step
/// scores one neighbor.
struct LengthBased<'a> {
    prep: &'a Prepared,
    beam_width: usize,
    restarts: usize,
    restarts_used: usize,
    instance_length: usize,
    rng: ChaCha20Rng,
    beam: Vec<Candidate>,
    pending: VecDeque<(usize, usize)>,
    next_gen: Vec<Candidate>,
    immediate: Option<Vec<usize>>,
    pub steps: u64,
    done: bool,
}

impl<'a> LengthBased<'a> {
    fn new(prep: &'a Prepared, inst: &ConjugacyInstance, cfg: &SolverConfig) -> Self {
        let identity = prep.platform.identity();
        let root = Candidate {
            slots: Vec::new(),
            el: identity.clone(),
            inv: identity.clone(),
            score: prep.score(&identity, &identity),
        };
        // An already-solved instance is accepted at zero steps.
        let immediate = (root.score == prep.target && prep.solves(&root.el, &root.inv))
            .then(Vec::new);
        let mut state = LengthBased {
            prep,
            beam_width: cfg.beam_width,
            restarts: cfg.restarts,
            restarts_used: 0,
            instance_length: inst.instance_length,
            rng: derived_rng(cfg.seed, "lba", 0),
            beam: vec![root],
            pending: VecDeque::new(),
            next_gen: Vec::new(),
            immediate,
            steps: 0,
            done: false,
        };
        state.refill_pending();
        state
    }

    fn refill_pending(&mut self) {
        self.pending.clear();
        for idx in 0..self.beam.len() {
            for slot in 0..self.prep.steps.len() {
                self.pending.push_back((idx, slot));
            }
        }
    }

    fn restart(&mut self) -> bool {
        if self.restarts_used >= self.restarts {
            return false;
        }
        self.restarts_used += 1;
        let length = 1 + self.restarts_used % self.instance_length.clamp(2, 6);
        let mut slots = Vec::with_capacity(length);
        for k in 0..length {
            loop {
                let slot = self.rng.gen_range(0..self.prep.steps.len());
                if k == 0 || !cancels(slot, slots[k - 1]) {
                    slots.push(slot);
                    break;
                }
            }
        }
        let mut el = self.prep.platform.identity();
        for &s in &slots {
            el = el.mul(&self.prep.steps.elements[s]);
        }
        let inv = el.inverse();
        let score = self.prep.score(&el, &inv);
        if score == self.prep.target && self.prep.solves(&el, &inv) {
            self.immediate = Some(slots.clone());
        }
        self.beam = vec![Candidate {
            slots,
            el,
            inv,
            score,
        }];
        self.next_gen.clear();
        self.refill_pending();
        true
    }

    fn step(&mut self) -> Poll {
        if self.done {
            return Poll::Exhausted;
        }
        if let Some(slots) = self.immediate.take() {
            self.done = true;
            return Poll::Found(slots);
        }
        // Find the next admissible neighbor; skipping a cancelling extension
        // costs nothing because it re-visits a shorter prefix.
        let (idx, slot) = loop {
            match self.pending.pop_front() {
                Some((idx, slot)) => {
                    let parent = &self.beam[idx];
                    if parent.slots.last().is_some_and(|&last| cancels(slot, last)) {
                        continue;
                    }
                    break (idx, slot);
                }
                None => {
                    // Generation finished: promote the strictly improving
                    // children, or restart on a plateau.
                    if self.next_gen.is_empty() {
                        if self.restart() {
                            return Poll::Continue;
                        }
                        self.done = true;
                        return Poll::Exhausted;
                    }
                    self.next_gen
                        .sort_by(|x, y| x.score.cmp(&y.score).then(x.slots.cmp(&y.slots)));
                    self.next_gen.truncate(self.beam_width);
                    self.beam = std::mem::take(&mut self.next_gen);
                    self.refill_pending();
                    return Poll::Continue;
                }
            }
        };
        let parent = &self.beam[idx];
        let el = parent.el.mul(&self.prep.steps.elements[slot]);
        let inv = el.inverse();
        let mut slots = parent.slots.clone();
        slots.push(slot);
        let score = self.prep.score(&el, &inv);
        self.steps += 1;
        // Only strictly improving children stay on the descent path, and
        // success fires when such a child bottoms out at the target length.
        if score < parent.score {
            if score == self.prep.target && self.prep.solves(&el, &inv) {
                self.done = true;
                return Poll::Found(slots);
            }
            self.next_gen.push(Candidate {
                slots,
                el,
                inv,
                score,
            });
        }
        Poll::Continue
    }
}

// ---------------------------------------------------------------------------
// Drivers
// ---------------------------------------------------------------------------

struct RawOutcome {
    outcome: AttackOutcome,
    slots: Option<Vec<usize>>,
}

fn finish(
    prep: &Prepared,
    tag: SolverTag,
    slots: Option<Vec<usize>>,
    steps: u64,
    started: Instant,
    budget_exhausted: bool,
) -> RawOutcome {
    let witness = slots.as_ref().map(|s| prep.steps.word_of_slots(s));
    RawOutcome {
        outcome: AttackOutcome {
            witness,
            solver: tag,
            steps,
            elapsed: started.elapsed(),
            budget_exhausted,
        },
        slots,
    }
}

fn run_brute_force(inst: &ConjugacyInstance, cfg: &SolverConfig) -> Result<RawOutcome> {
    cfg.validate()?;
    let prep = Prepared::new(inst)?;
    let started = Instant::now();
    let mut solver = BruteForce::new(&prep, cfg);
    loop {
        if solver.steps >= cfg.max_steps {
            return Ok(finish(
                &prep,
                SolverTag::Deterministic,
                None,
                solver.steps,
                started,
                true,
            ));
        }
        match solver.step() {
            Poll::Found(slots) => {
                return Ok(finish(
                    &prep,
                    SolverTag::Deterministic,
                    Some(slots),
                    solver.steps,
                    started,
                    false,
                ))
            }
            Poll::Exhausted => {
                return Ok(finish(
                    &prep,
                    SolverTag::Deterministic,
                    None,
                    solver.steps,
                    started,
                    true,
                ))
            }
            Poll::Continue => {}
        }
    }
}

fn run_length_based(inst: &ConjugacyInstance, cfg: &SolverConfig) -> Result<RawOutcome> {
    cfg.validate()?;
    let prep = Prepared::new(inst)?;
    let started = Instant::now();
    let mut solver = LengthBased::new(&prep, inst, cfg);
    loop {
        if solver.steps >= cfg.max_steps {
            return Ok(finish(
                &prep,
                SolverTag::Heuristic,
                None,
                solver.steps,
                started,
                true,
            ));
        }
        match solver.step() {
            Poll::Found(slots) => {
                return Ok(finish(
                    &prep,
                    SolverTag::Heuristic,
                    Some(slots),
                    solver.steps,
                    started,
                    false,
                ))
            }
            Poll::Exhausted => {
                return Ok(finish(
                    &prep,
                    SolverTag::Heuristic,
                    None,
                    solver.steps,
                    started,
                    true,
                ))
            }
            Poll::Continue => {}
        }
    }
}

/// Advance the heuristic `interleave_ratio` steps, then the enumerator one
/// step, until either side finds a verified witness. With a promised instance
/// and depth budget at least the hidden conjugator length the enumerator is
/// complete, so the race always terminates.
fn run_composite(inst: &ConjugacyInstance, cfg: &SolverConfig) -> Result<RawOutcome> {
    cfg.validate()?;
    let prep = Prepared::new(inst)?;
    let started = Instant::now();
    let mut heuristic = LengthBased::new(&prep, inst, cfg);
    let mut enumerator = BruteForce::new(&prep, cfg);
    let mut h_alive = true;
    let mut d_alive = true;
    loop {
        let total = heuristic.steps + enumerator.steps;
        if total >= cfg.max_steps || (!h_alive && !d_alive) {
            return Ok(finish(
                &prep,
                SolverTag::CompositeD,
                None,
                total,
                started,
                true,
            ));
        }
        if h_alive {
            for _ in 0..cfg.interleave_ratio {
                match heuristic.step() {
                    Poll::Found(slots) => {
                        let total = heuristic.steps + enumerator.steps;
                        return Ok(finish(
                            &prep,
                            SolverTag::CompositeH,
                            Some(slots),
                            total,
                            started,
                            false,
                        ));
                    }
                    Poll::Exhausted => {
                        h_alive = false;
                        break;
                    }
                    Poll::Continue => {}
                }
            }
        }
        if d_alive {
            match enumerator.step() {
                Poll::Found(slots) => {
                    let total = heuristic.steps + enumerator.steps;
                    return Ok(finish(
                        &prep,
                        SolverTag::CompositeD,
                        Some(slots),
                        total,
                        started,
                        false,
                    ));
                }
                Poll::Exhausted => d_alive = false,
                Poll::Continue => {}
            }
        }
    }
}

fn run_kind(inst: &ConjugacyInstance, cfg: &SolverConfig, kind: SolverKind) -> Result<RawOutcome> {
    let raw = match kind {
        SolverKind::BruteForce => run_brute_force(inst, cfg)?,
        SolverKind::LengthBased => run_length_based(inst, cfg)?,
        SolverKind::Composite => run_composite(inst, cfg)?,
    };
    #[cfg(debug_assertions)]
    if let Some(w) = &raw.outcome.witness {
        assert!(
            verify_witness(inst, w)?,
            "solver returned an invalid witness"
        );
    }
    Ok(raw)
}

/// Breadth-first enumeration of freely reduced conjugator candidates by
/// length, lexicographic within a length. Deterministic; complete up to
/// `max_depth`.
pub fn brute_force_search(inst: &ConjugacyInstance, cfg: &SolverConfig) -> Result<AttackOutcome> {
    Ok(run_kind(inst, cfg, SolverKind::BruteForce)?.outcome)
}

/// Length-based neighborhood descent with beam search and seeded restarts.
/// May fail (budget exhausted); never loops forever.
pub fn length_based_attack(inst: &ConjugacyInstance, cfg: &SolverConfig) -> Result<AttackOutcome> {
    Ok(run_kind(inst, cfg, SolverKind::LengthBased)?.outcome)
}

/// The deterministic race `H || D`.
pub fn composite_run(inst: &ConjugacyInstance, cfg: &SolverConfig) -> Result<AttackOutcome> {
    Ok(run_kind(inst, cfg, SolverKind::Composite)?.outcome)
}

pub fn solve(
    inst: &ConjugacyInstance,
    cfg: &SolverConfig,
    kind: SolverKind,
) -> Result<AttackOutcome> {
    Ok(run_kind(inst, cfg, kind)?.outcome)
}

/// Attack result serialization: `{solver, witness?, steps, elapsed_ms,
/// budget_exhausted}`. Wall time is reported only on request so re-runs stay
/// byte-identical.
pub fn outcome_to_json(outcome: &AttackOutcome, include_timings: bool) -> serde_json::Value {
    let mut value = json!({
        "solver": outcome.solver.label(),
        "steps": outcome.steps,
        "elapsed_ms": if include_timings { outcome.elapsed.as_millis() as u64 } else { 0 },
        "budget_exhausted": outcome.budget_exhausted,
    });
    if let Some(w) = &outcome.witness {
        value["witness"] = json!(w.to_string());
    }
    value
}

/// What a transcript attack produced beyond the raw solver outcome.
#[derive(Debug, Clone)]
pub struct AttackReport {
    pub outcome: AttackOutcome,
    /// The victim's derived key replayed with the recovered witness; absent
    /// when no witness was found or the witness is not expressible over the
    /// published tuple (AAG fallback searches).
    pub recovered_key: Option<Key>,
    /// Whether the winning search ran over the restricted public basis.
    pub witness_in_basis: bool,
}

impl AttackReport {
    pub fn to_json(&self, include_timings: bool) -> serde_json::Value {
        let mut value = outcome_to_json(&self.outcome, include_timings);
        value["witness_in_basis"] = json!(self.witness_in_basis);
        if let Some(key) = &self.recovered_key {
            value["recovered_key"] = json!(key.to_hex());
        }
        value
    }
}

/// Build the conjugacy instance an eavesdropper faces from a public
/// transcript, run the chosen solver against it, and replay the victim's key
/// computation with the recovered witness.
///
/// Ko–Lee yields the single pair `(a, a^x)` searched over Alice's public
/// pool; AAG yields the simultaneous pairs `(a_i, a_i^x)` searched over the
/// published opposite tuple. If the restricted search exhausts its budget the
/// attack falls back to the full platform alphabet (step counts accumulate);
/// a fallback witness still verifies but cannot be replayed through the AAG
/// substitution, and for Ko–Lee its key may disagree with the legitimate one.
pub fn attack_transcript(
    transcript: &Transcript,
    cfg: &SolverConfig,
    kind: SolverKind,
) -> Result<AttackReport> {
    let platform = transcript.platform;
    match transcript.protocol {
        ProtocolTag::KoLee => {
            let base = transcript.published[0].clone();
            let token = transcript.alice_tokens[0].clone();
            let alphabet = platform.alphabet_size();
            let pool_basis = transcript.kolee_pools.as_ref().map(|(alice, _)| {
                alice
                    .iter()
                    .map(|&i| Word::generator(i, alphabet))
                    .collect::<Result<Vec<_>>>()
            });
            let instance =
                ConjugacyInstance::new(platform, vec![(base, token)])?.promised_unknown();
            let (raw, in_basis) = match pool_basis {
                Some(basis) => solve_with_fallback(&instance, cfg, kind, basis?)?,
                None => (run_kind(&instance, cfg, kind)?, false),
            };
            let recovered_key = match &raw.outcome.witness {
                Some(witness) => {
                    let shared = transcript.bob_tokens[0].conjugated_by(witness);
                    Some(derive_key(platform, &shared)?)
                }
                None => None,
            };
            Ok(AttackReport {
                outcome: raw.outcome,
                recovered_key,
                witness_in_basis: in_basis,
            })
        }
        ProtocolTag::Aag => {
            let k = transcript.alice_tokens.len();
            let alice_public = transcript.published[..k].to_vec();
            let bob_public = transcript.published[k..].to_vec();
            let pairs: Vec<(Word, Word)> = alice_public
                .iter()
                .cloned()
                .zip(transcript.alice_tokens.iter().cloned())
                .collect();
            let instance = ConjugacyInstance::new(platform, pairs)?.promised_unknown();
            let (raw, in_basis) = solve_with_fallback(&instance, cfg, kind, bob_public)?;
            let recovered_key = match (&raw.outcome.witness, &raw.slots, in_basis) {
                (Some(witness), Some(slots), true) => Some(replay_aag_key(
                    platform,
                    witness,
                    slots,
                    &transcript.bob_tokens,
                )?),
                _ => None,
            };
            Ok(AttackReport {
                outcome: raw.outcome,
                recovered_key,
                witness_in_basis: in_basis,
            })
        }
    }
}

/// Run restricted to `basis` first; on budget exhaustion retry over the full
/// alphabet, accumulating step and time accounting.
fn solve_with_fallback(
    instance: &ConjugacyInstance,
    cfg: &SolverConfig,
    kind: SolverKind,
    basis: Vec<Word>,
) -> Result<(RawOutcome, bool)> {
    let restricted = instance.clone().with_basis(basis);
    let raw = run_kind(&restricted, cfg, kind)?;
    if raw.outcome.witness.is_some() {
        return Ok((raw, true));
    }
    let mut fallback = run_kind(instance, cfg, kind)?;
    fallback.outcome.steps += raw.outcome.steps;
    fallback.outcome.elapsed += raw.outcome.elapsed;
    Ok((fallback, false))
}

/// Replay Alice's AAG key computation with a witness expressed over the
/// published tuple: evaluate the witness template on Bob's conjugated tuple
/// and cancel the witness itself.
fn replay_aag_key(
    platform: Platform,
    witness: &Word,
    slots: &[usize],
    bob_tokens: &[Word],
) -> Result<Key> {
    let token_elements = bob_tokens
        .iter()
        .map(|w| platform.element(w))
        .collect::<Result<Vec<_>>>()?;
    let mut evaluated = platform.identity();
    for &slot in slots {
        let img = &token_elements[slot / 2];
        evaluated = if slot % 2 == 0 {
            evaluated.mul(img)
        } else {
            evaluated.mul(&img.inverse())
        };
    }
    let x = platform.element(witness)?;
    let shared = evaluated.mul(&x.inverse()).inverse();
    derive_key(platform, &shared.to_word())
}

/// Abstract template letters for a slot sequence over an m-word basis.
pub fn slots_to_template(slots: &[usize], basis_len: usize) -> Word {
    let letters = slots
        .iter()
        .map(|&s| Letter::new((s / 2 + 1) as u32, if s % 2 == 0 { 1 } else { -1 }))
        .collect();
    Word::from_letters(letters, basis_len as u32).expect("slots in range")
}
