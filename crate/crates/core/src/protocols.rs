//! The two conjugation-based key-exchange protocols and their plumbing:
//! Ko–Lee commuting-conjugation exchange, Anshel–Anshel–Goldfeld commutator
//! exchange, key derivation, public transcripts and the multi-round mode.

use crate::error::{Error, Result};
use crate::platform::Platform;
use crate::words::{random_reduced_word, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Alice,
    Bob,
}

impl Role {
    pub fn label(self) -> &'static str {
        match self {
            Role::Alice => "alice",
            Role::Bob => "bob",
        }
    }
}

/// Ko–Lee configuration: a published base element and two disjoint generator
/// pools whose elements pairwise commute, one pool per party.
#[derive(Debug, Clone)]
pub struct KoLeeConfig {
    pub platform: Platform,
    pub base: Word,
    pub alice_generators: Vec<u32>,
    pub bob_generators: Vec<u32>,
    pub secret_length: usize,
}

impl KoLeeConfig {
    /// Validates index ranges, disjointness, and that every Alice generator
    /// commutes with every Bob generator (checked through the word problem).
    pub fn new(
        platform: Platform,
        base: Word,
        alice_generators: Vec<u32>,
        bob_generators: Vec<u32>,
        secret_length: usize,
    ) -> Result<Self> {
        let alphabet = platform.alphabet_size();
        for &i in alice_generators.iter().chain(&bob_generators) {
            if i == 0 || i > alphabet {
                return Err(Error::LetterOutOfRange {
                    index: i,
                    alphabet_size: alphabet,
                });
            }
        }
        if alice_generators.iter().any(|i| bob_generators.contains(i)) {
            return Err(Error::InvalidConfig(
                "generator pools must be disjoint".into(),
            ));
        }
        for &i in &alice_generators {
            for &j in &bob_generators {
                let gi = Word::generator(i, alphabet)?;
                let gj = Word::generator(j, alphabet)?;
                if !platform.equal(&gi.concat(&gj), &gj.concat(&gi))? {
                    return Err(Error::InvalidConfig(format!(
                        "generators g{i} and g{j} do not commute"
                    )));
                }
            }
        }
        platform.element(&base)?;
        Ok(KoLeeConfig {
            platform,
            base,
            alice_generators,
            bob_generators,
            secret_length,
        })
    }

    pub fn pool(&self, role: Role) -> &[u32] {
        match role {
            Role::Alice => &self.alice_generators,
            Role::Bob => &self.bob_generators,
        }
    }
}

/// The standard commuting split for braids and symmetric groups: Alice takes
/// `g1 .. g(⌊n/2⌋-1)`, Bob takes `g(⌊n/2⌋+1) .. g(n-1)`; the middle generator
/// is skipped so the two blocks commute strandwise.
pub fn default_commuting_pools(platform: Platform) -> Result<(Vec<u32>, Vec<u32>)> {
    let n = match platform {
        Platform::Braid { strands } => strands,
        Platform::Symmetric { degree } => degree,
        Platform::Free { .. } => {
            return Err(Error::InvalidConfig(
                "the free group has no commuting generator pools".into(),
            ))
        }
    };
    let mid = n / 2;
    if mid < 2 || mid + 1 > n - 1 {
        return Err(Error::InvalidConfig(format!(
            "platform {platform} is too small for disjoint commuting pools"
        )));
    }
    Ok(((1..mid).collect(), (mid + 1..n).collect()))
}

/// Anshel–Anshel–Goldfeld configuration: two published tuples of words; each
/// party's secret is a word in the other party's tuple.
#[derive(Debug, Clone)]
pub struct AagConfig {
    pub platform: Platform,
    pub alice_public: Vec<Word>,
    pub bob_public: Vec<Word>,
    pub secret_length: usize,
}

impl AagConfig {
    pub fn new(
        platform: Platform,
        alice_public: Vec<Word>,
        bob_public: Vec<Word>,
        secret_length: usize,
    ) -> Result<Self> {
        if alice_public.is_empty() || bob_public.is_empty() {
            return Err(Error::InvalidConfig(
                "both published tuples must be nonempty".into(),
            ));
        }
        for w in alice_public.iter().chain(&bob_public) {
            platform.element(w)?;
        }
        Ok(AagConfig {
            platform,
            alice_public,
            bob_public,
            secret_length,
        })
    }

    /// The tuple the given role writes its secret in.
    pub fn opposite_public(&self, role: Role) -> &[Word] {
        match role {
            Role::Alice => &self.bob_public,
            Role::Bob => &self.alice_public,
        }
    }

    /// The tuple the given role conjugates and sends.
    pub fn own_public(&self, role: Role) -> &[Word] {
        match role {
            Role::Alice => &self.alice_public,
            Role::Bob => &self.bob_public,
        }
    }
}

/// Ko–Lee step 1: pick a private word over the role's pool and send the
/// conjugated base. Returns `(secret, token)` with
/// `token = normal_form(secret · base · secret⁻¹)`.
pub fn kolee_commit<R: Rng + ?Sized>(
    cfg: &KoLeeConfig,
    role: Role,
    rng: &mut R,
) -> Result<(Word, Word)> {
    let pool = cfg.pool(role);
    if pool.is_empty() {
        return Err(Error::EmptyGeneratorPool { role: role.label() });
    }
    let secret = random_reduced_word(
        rng,
        cfg.platform.alphabet_size(),
        cfg.secret_length,
        Some(pool),
    )?;
    let base = cfg.platform.element(&cfg.base)?;
    let x = cfg.platform.element(&secret)?;
    let token = base.conjugated_by(&x).to_word();
    Ok((secret, token))
}

/// Ko–Lee step 3: conjugate the peer's token by the own secret. When the two
/// pools commute, both parties compute the same element.
pub fn kolee_shared(cfg: &KoLeeConfig, secret: &Word, peer_token: &Word) -> Result<Word> {
    let token = cfg.platform.element(peer_token)?;
    let x = cfg.platform.element(secret)?;
    Ok(token.conjugated_by(&x).to_word())
}

/// One party's Anshel–Anshel–Goldfeld commitment.
#[derive(Debug, Clone)]
pub struct AagCommit {
    /// The secret as an abstract word in the opposite published tuple.
    pub template: Word,
    /// The secret evaluated in the platform group.
    pub secret: Word,
    /// The own published tuple conjugated by the secret, in normal form.
    pub tokens: Vec<Word>,
}

/// AAG steps 1–2: pick a template over the opposite alphabet, evaluate it,
/// and send the own tuple conjugated by the result.
pub fn aag_commit<R: Rng + ?Sized>(
    cfg: &AagConfig,
    role: Role,
    rng: &mut R,
) -> Result<AagCommit> {
    let opposite = cfg.opposite_public(role);
    let template = random_reduced_word(rng, opposite.len() as u32, cfg.secret_length, None)?;
    let secret = template.substitute(opposite)?;
    let x = cfg.platform.element(&secret)?;
    let x_inv = x.inverse();
    let tokens = cfg
        .own_public(role)
        .iter()
        .map(|a| {
            let el = cfg.platform.element(a)?;
            Ok(x.mul(&el).mul(&x_inv).to_word())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AagCommit {
        template,
        secret,
        tokens,
    })
}

/// AAG steps 3–4: evaluate the template on the peer's conjugated tuple and
/// cancel the own secret, producing the commutator `x·y·x⁻¹·y⁻¹` on both
/// sides. Alice inverts her product; Bob multiplies directly.
pub fn aag_shared(
    cfg: &AagConfig,
    role: Role,
    template: &Word,
    own_secret: &Word,
    peer_tokens: &[Word],
) -> Result<Word> {
    if peer_tokens.len() != template.alphabet_size() as usize {
        return Err(Error::TupleLengthMismatch {
            expected: template.alphabet_size() as usize,
            actual: peer_tokens.len(),
        });
    }
    let token_elements = peer_tokens
        .iter()
        .map(|w| cfg.platform.element(w))
        .collect::<Result<Vec<_>>>()?;
    // Evaluate template(peer tokens) at the element level; the peer tokens
    // are canonical words and can be long, so no letter-level substitution.
    let mut evaluated = cfg.platform.identity();
    for l in template.letters() {
        let img = &token_elements[(l.index() - 1) as usize];
        evaluated = if l.sign() > 0 {
            evaluated.mul(img)
        } else {
            evaluated.mul(&img.inverse())
        };
    }
    let own = cfg.platform.element(own_secret)?;
    let shared = match role {
        // evaluated = y·x·y⁻¹, so invert(evaluated · x⁻¹) = x·y·x⁻¹·y⁻¹.
        Role::Alice => evaluated.mul(&own.inverse()).inverse(),
        // evaluated = x·y·x⁻¹, so evaluated · y⁻¹ = x·y·x⁻¹·y⁻¹.
        Role::Bob => evaluated.mul(&own.inverse()),
    };
    Ok(shared.to_word())
}

/// A derived 32-byte key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Key([u8; 32]);

impl Key {
    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(text: &str) -> Result<Key> {
        let text = text.trim();
        if text.len() != 64 || !text.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(Error::InvalidConfig(format!(
                "`{text}` is not a 32-byte hex key"
            )));
        }
        let mut out = [0u8; 32];
        for (i, chunk) in text.as_bytes().chunks(2).enumerate() {
            out[i] = u8::from_str_radix(std::str::from_utf8(chunk).unwrap(), 16).unwrap();
        }
        Ok(Key(out))
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Digest of the canonical serialization of the shared element, prefixed by
/// the platform descriptor. Equal group elements always yield identical keys.
pub fn derive_key(platform: Platform, shared: &Word) -> Result<Key> {
    let canonical = platform.normal_form(shared)?;
    let mut hasher = Sha256::new();
    hasher.update(platform.to_string().as_bytes());
    hasher.update(b"\n");
    hasher.update(canonical.to_string().as_bytes());
    Ok(Key(hasher.finalize().into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolTag {
    KoLee,
    Aag,
}

impl ProtocolTag {
    pub fn label(self) -> &'static str {
        match self {
            ProtocolTag::KoLee => "kolee",
            ProtocolTag::Aag => "aag",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "kolee" => Ok(ProtocolTag::KoLee),
            "aag" => Ok(ProtocolTag::Aag),
            other => Err(Error::InvalidConfig(format!("unknown protocol `{other}`"))),
        }
    }
}

/// Everything an eavesdropper sees: the published data and both parties'
/// outgoing tuples. Never contains a private word. For Ko–Lee the public
/// generator pools ride along because an attacker targets the conjugator
/// inside the sender's pool subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub protocol: ProtocolTag,
    pub platform: Platform,
    pub published: Vec<Word>,
    pub alice_tokens: Vec<Word>,
    pub bob_tokens: Vec<Word>,
    pub kolee_pools: Option<(Vec<u32>, Vec<u32>)>,
}

/// Wire/file form of a transcript, all words in the textual word format.
#[derive(Debug, Serialize, Deserialize)]
struct TranscriptFile {
    protocol: String,
    platform: String,
    published: Vec<String>,
    alice_tokens: Vec<String>,
    bob_tokens: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alice_generators: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bob_generators: Option<Vec<u32>>,
}

impl Transcript {
    pub fn to_json_bytes(&self) -> Vec<u8> {
        let file = TranscriptFile {
            protocol: self.protocol.label().to_string(),
            platform: self.platform.to_string(),
            published: self.published.iter().map(|w| w.to_string()).collect(),
            alice_tokens: self.alice_tokens.iter().map(|w| w.to_string()).collect(),
            bob_tokens: self.bob_tokens.iter().map(|w| w.to_string()).collect(),
            alice_generators: self.kolee_pools.as_ref().map(|p| p.0.clone()),
            bob_generators: self.kolee_pools.as_ref().map(|p| p.1.clone()),
        };
        let mut bytes = serde_json::to_vec_pretty(&file).expect("serializable");
        bytes.push(b'\n');
        bytes
    }

    pub fn from_json_bytes(bytes: &[u8]) -> Result<Transcript> {
        let file: TranscriptFile = serde_json::from_slice(bytes)
            .map_err(|e| Error::MalformedTranscript(e.to_string()))?;
        let protocol = ProtocolTag::parse(&file.protocol)
            .map_err(|_| Error::MalformedTranscript(format!("protocol `{}`", file.protocol)))?;
        let platform: Platform = file
            .platform
            .parse()
            .map_err(|_| Error::MalformedTranscript(format!("platform `{}`", file.platform)))?;
        let alphabet = platform.alphabet_size();
        let parse_all = |texts: &[String]| -> Result<Vec<Word>> {
            texts
                .iter()
                .map(|t| {
                    Word::parse(t, alphabet)
                        .map_err(|e| Error::MalformedTranscript(e.to_string()))
                })
                .collect()
        };
        let transcript = Transcript {
            protocol,
            platform,
            published: parse_all(&file.published)?,
            alice_tokens: parse_all(&file.alice_tokens)?,
            bob_tokens: parse_all(&file.bob_tokens)?,
            kolee_pools: match (file.alice_generators, file.bob_generators) {
                (Some(a), Some(b)) => Some((a, b)),
                _ => None,
            },
        };
        match transcript.protocol {
            ProtocolTag::KoLee => {
                if transcript.published.len() != 1
                    || transcript.alice_tokens.len() != 1
                    || transcript.bob_tokens.len() != 1
                {
                    return Err(Error::MalformedTranscript(
                        "a Ko-Lee transcript has one published word and one token per party"
                            .into(),
                    ));
                }
            }
            ProtocolTag::Aag => {
                let k = transcript.alice_tokens.len();
                let m = transcript.bob_tokens.len();
                if k == 0 || m == 0 || transcript.published.len() != k + m {
                    return Err(Error::MalformedTranscript(
                        "an AAG transcript publishes k + m words matching the token tuples"
                            .into(),
                    ));
                }
            }
        }
        Ok(transcript)
    }
}

/// A protocol instance with all public parameters fixed.
#[derive(Debug, Clone)]
pub enum ProtocolConfig {
    KoLee(KoLeeConfig),
    Aag(AagConfig),
}

impl ProtocolConfig {
    pub fn platform(&self) -> Platform {
        match self {
            ProtocolConfig::KoLee(c) => c.platform,
            ProtocolConfig::Aag(c) => c.platform,
        }
    }

    pub fn tag(&self) -> ProtocolTag {
        match self {
            ProtocolConfig::KoLee(_) => ProtocolTag::KoLee,
            ProtocolConfig::Aag(_) => ProtocolTag::Aag,
        }
    }
}

/// Knobs for generating a fresh protocol configuration from a seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenParams {
    pub secret_length: usize,
    /// Ko–Lee: length of the published base word.
    pub base_length: usize,
    /// AAG: published words per party (k = m).
    pub publics: usize,
    /// AAG: length of each published word.
    pub public_length: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            secret_length: 20,
            base_length: 8,
            publics: 5,
            public_length: 8,
        }
    }
}

/// Deterministically generate the public protocol data from a seed. Both
/// parties of a wire exchange run this with the same seed and obtain the
/// same configuration.
pub fn generate_config(
    tag: ProtocolTag,
    platform: Platform,
    params: &GenParams,
    seed: u64,
) -> Result<ProtocolConfig> {
    let mut rng = derived_rng(seed, "config", 0);
    let alphabet = platform.alphabet_size();
    match tag {
        ProtocolTag::KoLee => {
            let (alice, bob) = default_commuting_pools(platform)?;
            let base = random_reduced_word(&mut rng, alphabet, params.base_length, None)?;
            Ok(ProtocolConfig::KoLee(KoLeeConfig::new(
                platform,
                base,
                alice,
                bob,
                params.secret_length,
            )?))
        }
        ProtocolTag::Aag => {
            let tuple = |rng: &mut ChaCha20Rng| -> Result<Vec<Word>> {
                (0..params.publics)
                    .map(|_| random_reduced_word(rng, alphabet, params.public_length, None))
                    .collect()
            };
            let alice_public = tuple(&mut rng)?;
            let bob_public = tuple(&mut rng)?;
            Ok(ProtocolConfig::Aag(AagConfig::new(
                platform,
                alice_public,
                bob_public,
                params.secret_length,
            )?))
        }
    }
}

/// Serializable form of a protocol configuration.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "protocol")]
enum ConfigFile {
    #[serde(rename = "kolee")]
    KoLee {
        platform: String,
        base: String,
        alice_generators: Vec<u32>,
        bob_generators: Vec<u32>,
        secret_length: usize,
    },
    #[serde(rename = "aag")]
    Aag {
        platform: String,
        alice_public: Vec<String>,
        bob_public: Vec<String>,
        secret_length: usize,
    },
}

pub fn config_to_json_bytes(cfg: &ProtocolConfig) -> Vec<u8> {
    let file = match cfg {
        ProtocolConfig::KoLee(c) => ConfigFile::KoLee {
            platform: c.platform.to_string(),
            base: c.base.to_string(),
            alice_generators: c.alice_generators.clone(),
            bob_generators: c.bob_generators.clone(),
            secret_length: c.secret_length,
        },
        ProtocolConfig::Aag(c) => ConfigFile::Aag {
            platform: c.platform.to_string(),
            alice_public: c.alice_public.iter().map(|w| w.to_string()).collect(),
            bob_public: c.bob_public.iter().map(|w| w.to_string()).collect(),
            secret_length: c.secret_length,
        },
    };
    let mut bytes = serde_json::to_vec_pretty(&file).expect("serializable");
    bytes.push(b'\n');
    bytes
}

pub fn config_from_json_bytes(bytes: &[u8]) -> Result<ProtocolConfig> {
    let file: ConfigFile = serde_json::from_slice(bytes)?;
    match file {
        ConfigFile::KoLee {
            platform,
            base,
            alice_generators,
            bob_generators,
            secret_length,
        } => {
            let platform: Platform = platform.parse()?;
            let base = Word::parse(&base, platform.alphabet_size())?;
            Ok(ProtocolConfig::KoLee(KoLeeConfig::new(
                platform,
                base,
                alice_generators,
                bob_generators,
                secret_length,
            )?))
        }
        ConfigFile::Aag {
            platform,
            alice_public,
            bob_public,
            secret_length,
        } => {
            let platform: Platform = platform.parse()?;
            let alphabet = platform.alphabet_size();
            let parse_all = |texts: Vec<String>| -> Result<Vec<Word>> {
                texts.iter().map(|t| Word::parse(t, alphabet)).collect()
            };
            Ok(ProtocolConfig::Aag(AagConfig::new(
                platform,
                parse_all(alice_public)?,
                parse_all(bob_public)?,
                secret_length,
            )?))
        }
    }
}

/// One party's private state after an exchange.
#[derive(Debug, Clone)]
pub struct PartyState {
    pub secret: Word,
    /// AAG only: the secret as a template over the opposite tuple.
    pub template: Option<Word>,
}

/// Outcome of a full two-party exchange.
#[derive(Debug, Clone)]
pub struct Exchange {
    pub transcript: Transcript,
    pub shared_alice: Word,
    pub shared_bob: Word,
    pub alice_key: Key,
    pub bob_key: Key,
    pub alice: PartyState,
    pub bob: PartyState,
}

/// Per-role, per-round randomness. Streams are derived by hashing so that a
/// party on one end of a wire can reproduce exactly its own draws and nothing
/// about the peer's.
pub fn derived_rng(seed: u64, stream: &str, round: u64) -> ChaCha20Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(b"/");
    hasher.update(stream.as_bytes());
    hasher.update(b"/");
    hasher.update(round.to_le_bytes());
    ChaCha20Rng::from_seed(hasher.finalize().into())
}

/// Run both sides of one exchange in process.
pub fn run_exchange(cfg: &ProtocolConfig, seed: u64) -> Result<Exchange> {
    run_exchange_round(cfg, seed, 0)
}

fn run_exchange_round(cfg: &ProtocolConfig, seed: u64, round: u64) -> Result<Exchange> {
    let mut rng_alice = derived_rng(seed, "alice", round);
    let mut rng_bob = derived_rng(seed, "bob", round);
    match cfg {
        ProtocolConfig::KoLee(c) => {
            let (x, token_a) = kolee_commit(c, Role::Alice, &mut rng_alice)?;
            let (y, token_b) = kolee_commit(c, Role::Bob, &mut rng_bob)?;
            let shared_alice = kolee_shared(c, &x, &token_b)?;
            let shared_bob = kolee_shared(c, &y, &token_a)?;
            let transcript = Transcript {
                protocol: ProtocolTag::KoLee,
                platform: c.platform,
                published: vec![c.base.clone()],
                alice_tokens: vec![token_a],
                bob_tokens: vec![token_b],
                kolee_pools: Some((c.alice_generators.clone(), c.bob_generators.clone())),
            };
            Ok(Exchange {
                alice_key: derive_key(c.platform, &shared_alice)?,
                bob_key: derive_key(c.platform, &shared_bob)?,
                shared_alice,
                shared_bob,
                transcript,
                alice: PartyState {
                    secret: x,
                    template: None,
                },
                bob: PartyState {
                    secret: y,
                    template: None,
                },
            })
        }
        ProtocolConfig::Aag(c) => {
            let alice = aag_commit(c, Role::Alice, &mut rng_alice)?;
            let bob = aag_commit(c, Role::Bob, &mut rng_bob)?;
            let shared_alice =
                aag_shared(c, Role::Alice, &alice.template, &alice.secret, &bob.tokens)?;
            let shared_bob = aag_shared(c, Role::Bob, &bob.template, &bob.secret, &alice.tokens)?;
            let mut published = c.alice_public.clone();
            published.extend(c.bob_public.iter().cloned());
            let transcript = Transcript {
                protocol: ProtocolTag::Aag,
                platform: c.platform,
                published,
                alice_tokens: alice.tokens.clone(),
                bob_tokens: bob.tokens.clone(),
                kolee_pools: None,
            };
            Ok(Exchange {
                alice_key: derive_key(c.platform, &shared_alice)?,
                bob_key: derive_key(c.platform, &shared_bob)?,
                shared_alice,
                shared_bob,
                transcript,
                alice: PartyState {
                    secret: alice.secret,
                    template: Some(alice.template),
                },
                bob: PartyState {
                    secret: bob.secret,
                    template: Some(bob.template),
                },
            })
        }
    }
}

/// One round of a multi-round run.
#[derive(Debug, Clone)]
pub struct RoundOutcome {
    pub transcript: Transcript,
    pub shared: Word,
}

/// A multi-round run: independent exchanges plus a combined key.
#[derive(Debug, Clone)]
pub struct MultiRound {
    pub rounds: Vec<RoundOutcome>,
    pub combined: Key,
}

/// Run `rounds` independent seeded exchanges of the same protocol; the
/// combined key digests the length-framed canonical serialization of every
/// per-round shared element. Per-round transcripts are kept so attacks can
/// replay any single round.
pub fn multi_round(cfg: &ProtocolConfig, rounds: usize, seed: u64) -> Result<MultiRound> {
    assert!(rounds >= 1, "at least one round");
    let platform = cfg.platform();
    let mut hasher = Sha256::new();
    hasher.update(platform.to_string().as_bytes());
    hasher.update(b"\n");
    let mut outcomes = Vec::with_capacity(rounds);
    for round in 0..rounds {
        let exchange = run_exchange_round(cfg, seed, round as u64)?;
        let canonical = platform.normal_form(&exchange.shared_alice)?;
        let text = canonical.to_string();
        hasher.update((text.len() as u32).to_be_bytes());
        hasher.update(text.as_bytes());
        outcomes.push(RoundOutcome {
            transcript: exchange.transcript,
            shared: canonical,
        });
    }
    Ok(MultiRound {
        rounds: outcomes,
        combined: Key(hasher.finalize().into()),
    })
}
