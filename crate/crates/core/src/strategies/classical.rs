use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_contestants, Error, Result};
use crate::game::{Parity, Response, RoundContext, TeamStrategy};
use crate::quantum::HalfInteger;
use crate::rng::PartyRng;

/// Bit a contestant reports in the forced-play strategy: the integer part
/// of her apples (0 for `{0, 1/2}`, 1 for `{1, 3/2}`).
pub fn classical_message(n: HalfInteger) -> bool {
    n.integer_part()
}

/// Alice's forced-play guess.
///
/// Alice adds her own integer part to the referee's sum. That sum misses
/// the carry from the half-apples, `(#halves / 2) mod 2`; Alice flips the
/// guess whenever the carry is odd in the majority of the variations
/// consistent with what she holds. For three players that is exactly when
/// she holds a half; for four players it is always.
pub fn alice_decide_classical(c: usize, n_a: HalfInteger, referee_sum: bool) -> Parity {
    let flip = match c {
        3 => n_a.has_half(),
        _ => true,
    };
    Parity::from_bit(referee_sum ^ classical_message(n_a) ^ flip)
}

/// A deterministic classical team: who volunteers, what each party sends,
/// and how Alice decides in voluntary and in forced rounds.
///
/// Maps are indexed by half-units `0..4`. `messages[j - 1]` belongs to
/// party `j`; decision tables are `[n_A][referee_sum]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalStrategySpec {
    pub contestants: usize,
    pub accept: Vec<[bool; 4]>,
    pub messages: Vec<[bool; 4]>,
    pub forced_decision: [[Parity; 2]; 4],
    pub voluntary_decision: [[Parity; 2]; 4],
}

/// Voluntary play on `{0, 1}` (certain win), forced play with the
/// integer-part messages and [`alice_decide_classical`].
pub fn best_classical_team(c: usize) -> Result<ClassicalStrategySpec> {
    check_contestants(c)?;
    let accept = [true, false, true, false];
    let message = HalfInteger::ALL.map(classical_message);
    let table = |decide: &dyn Fn(HalfInteger, bool) -> Parity| {
        HalfInteger::ALL.map(|n| [decide(n, false), decide(n, true)])
    };
    Ok(ClassicalStrategySpec {
        contestants: c,
        accept: vec![accept; c],
        messages: vec![message; c - 1],
        forced_decision: table(&|n, s| alice_decide_classical(c, n, s)),
        // everyone holds 0 or 1, so the integer parts carry the full parity
        voluntary_decision: table(&|n, s| Parity::from_bit(s ^ classical_message(n))),
    })
}

impl ClassicalStrategySpec {
    pub fn validate(&self) -> Result<()> {
        check_contestants(self.contestants)?;
        if self.accept.len() != self.contestants || self.messages.len() + 1 != self.contestants {
            return Err(Error::InvalidArgument(format!(
                "strategy for {} contestants needs {} accept sets and {} message maps",
                self.contestants,
                self.contestants,
                self.contestants - 1
            )));
        }
        Ok(())
    }

    pub fn message(&self, party: usize, n: HalfInteger) -> bool {
        self.messages[party - 1][usize::from(n.halves())]
    }

    pub fn accepts(&self, party: usize, n: HalfInteger) -> bool {
        self.accept[party][usize::from(n.halves())]
    }

    /// Serializes to the text format read by [`FromStr`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "contestants {}", self.contestants);
        for (party, set) in self.accept.iter().enumerate() {
            let members: Vec<String> = HalfInteger::ALL
                .iter()
                .filter(|h| set[usize::from(h.halves())])
                .map(|h| h.to_string())
                .collect();
            let members = if members.is_empty() { "none".to_string() } else { members.join(" ") };
            let _ = writeln!(s, "accept {party} {members}");
        }
        for (i, map) in self.messages.iter().enumerate() {
            let bits: Vec<&str> = map.iter().map(|&b| if b { "1" } else { "0" }).collect();
            let _ = writeln!(s, "message {} {}", i + 1, bits.join(" "));
        }
        for (keyword, table) in [("decide", &self.forced_decision), ("decide-voluntary", &self.voluntary_decision)] {
            for n in HalfInteger::ALL {
                let row = table[usize::from(n.halves())];
                let _ = writeln!(s, "{keyword} {n} {} {}", row[0], row[1]);
            }
        }
        s
    }
}

/// Line-oriented format, `#` starts a comment:
///
/// ```text
/// contestants 3
/// accept 0 0 1            # party, counts it volunteers on (or `none`)
/// message 1 0 0 1 1       # party >= 1, bits for 0, 1/2, 1, 3/2
/// decide 1/2 odd even     # n_A, guess for referee sum 0 and 1 (forced rounds)
/// decide-voluntary 0 even odd
/// ```
///
/// Every party `1..c` needs a `message` line and every `n_A` a `decide`
/// line. Missing `accept` lines mean the party never volunteers; missing
/// `decide-voluntary` rows fall back to `decide`.
impl FromStr for ClassicalStrategySpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut contestants = None;
        let mut accept: Vec<(usize, [bool; 4])> = Vec::new();
        let mut messages: Vec<(usize, [bool; 4])> = Vec::new();
        let mut forced: [Option<[Parity; 2]>; 4] = [None; 4];
        let mut voluntary: [Option<[Parity; 2]>; 4] = [None; 4];

        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let perr = |message: String| Error::Parse { line, message };
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let words: Vec<&str> = body.split_whitespace().collect();
            let party = |w: Option<&&str>| -> Result<usize> {
                w.ok_or_else(|| perr("missing party index".into()))?
                    .parse()
                    .map_err(|_| perr("bad party index".into()))
            };
            match words[0] {
                "contestants" => {
                    let c: usize = words
                        .get(1)
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| perr("expected a contestant count".into()))?;
                    contestants = Some(check_contestants(c).map_err(|e| perr(e.to_string()))?);
                }
                "accept" => {
                    let p = party(words.get(1))?;
                    let mut set = [false; 4];
                    if words.get(2) != Some(&"none") {
                        for w in &words[2..] {
                            let h: HalfInteger = w.parse().map_err(|e: Error| perr(e.to_string()))?;
                            set[usize::from(h.halves())] = true;
                        }
                    }
                    accept.push((p, set));
                }
                "message" => {
                    let p = party(words.get(1))?;
                    if p == 0 {
                        return Err(perr("Alice (party 0) does not send a message".into()));
                    }
                    if words.len() != 6 {
                        return Err(perr("message needs four bits".into()));
                    }
                    let mut map = [false; 4];
                    for (slot, w) in map.iter_mut().zip(&words[2..]) {
                        *slot = match *w {
                            "0" => false,
                            "1" => true,
                            _ => return Err(perr(format!("bit expected, got {w:?}"))),
                        };
                    }
                    messages.push((p, map));
                }
                kw @ ("decide" | "decide-voluntary") => {
                    if words.len() != 4 {
                        return Err(perr(format!("{kw} needs n_A and two guesses")));
                    }
                    let n: HalfInteger = words[1].parse().map_err(|e: Error| perr(e.to_string()))?;
                    let guess = |w: &str| match w {
                        "even" | "E" => Ok(Parity::Even),
                        "odd" | "O" => Ok(Parity::Odd),
                        _ => Err(perr(format!("even/odd expected, got {w:?}"))),
                    };
                    let row = [guess(words[2])?, guess(words[3])?];
                    let table = if kw == "decide" { &mut forced } else { &mut voluntary };
                    table[usize::from(n.halves())] = Some(row);
                }
                other => return Err(perr(format!("unknown directive {other:?}"))),
            }
        }

        let c = contestants.ok_or(Error::Parse { line: 0, message: "missing `contestants`".into() })?;
        let mut spec_accept = vec![[false; 4]; c];
        for (p, set) in accept {
            *spec_accept
                .get_mut(p)
                .ok_or(Error::Parse { line: 0, message: format!("accept for unknown party {p}") })? = set;
        }
        let mut spec_messages = vec![None; c - 1];
        for (p, map) in messages {
            *spec_messages
                .get_mut(p - 1)
                .ok_or(Error::Parse { line: 0, message: format!("message for unknown party {p}") })? = Some(map);
        }
        let spec_messages = spec_messages
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or(Error::Parse { line: 0, message: format!("party {} has no message map", i + 1) }))
            .collect::<Result<Vec<_>>>()?;
        let mut forced_decision = [[Parity::Even; 2]; 4];
        let mut voluntary_decision = [[Parity::Even; 2]; 4];
        for h in 0..4 {
            forced_decision[h] = forced[h].ok_or(Error::Parse {
                line: 0,
                message: format!("no decide row for n_A = {}", HalfInteger::ALL[h]),
            })?;
            voluntary_decision[h] = voluntary[h].unwrap_or(forced_decision[h]);
        }
        let spec = ClassicalStrategySpec {
            contestants: c,
            accept: spec_accept,
            messages: spec_messages,
            forced_decision,
            voluntary_decision,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl TeamStrategy for ClassicalStrategySpec {
    type Shared = ();

    fn contestants(&self) -> usize {
        self.contestants
    }

    fn prepare(&self, _: &mut PartyRng) {}

    fn respond(
        &self,
        party: usize,
        apples: HalfInteger,
        _: &RoundContext,
        _: &mut (),
        _: &mut PartyRng,
    ) -> Response {
        Response {
            ready: self.accepts(party, apples),
            bit: party > 0 && self.message(party, apples),
        }
    }

    fn decide(
        &self,
        _: Response,
        apples: HalfInteger,
        referee_sum: bool,
        ctx: &RoundContext,
        _: &mut PartyRng,
    ) -> Parity {
        // an unforced round is only played when everyone volunteered
        let table = if ctx.forced { &self.forced_decision } else { &self.voluntary_decision };
        table[usize::from(apples.halves())][usize::from(referee_sum)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{enumerate_variations, parity_of_total, play_round, AppleAssignment};
    use proptest::prelude::*;

    fn forced_ctx() -> RoundContext {
        RoundContext { round: 1, plays_so_far: 0, rounds: 1, quota: 1, forced: true }
    }

    #[test]
    fn message_examples() {
        assert!(!classical_message(HalfInteger::ZERO));
        assert!(!classical_message(HalfInteger::HALF));
        assert!(classical_message(HalfInteger::ONE));
        assert!(classical_message(HalfInteger::THREE_HALVES));
    }

    #[test]
    fn all_zero_guess_is_even() {
        assert_eq!(alice_decide_classical(3, HalfInteger::ZERO, false), Parity::Even);
    }

    /// Direct enumeration of the rule, independent of the team plumbing.
    fn rule_wins(c: usize) -> usize {
        enumerate_variations(c)
            .unwrap()
            .iter()
            .filter(|a| {
                let n = a.counts();
                let sum = n[1..].iter().fold(false, |acc, &h| acc ^ classical_message(h));
                alice_decide_classical(c, n[0], sum) == parity_of_total(a)
            })
            .count()
    }

    #[test]
    fn forced_rule_wins_three_quarters() {
        assert_eq!(rule_wins(3), 24);
        assert_eq!(rule_wins(4), 96);
    }

    #[test]
    fn forced_team_matches_rule() {
        for c in [3, 4] {
            let team = best_classical_team(c).unwrap();
            let wins = enumerate_variations(c)
                .unwrap()
                .iter()
                .filter(|a| play_round(&team, a, &forced_ctx(), 0).win == Some(true))
                .count();
            assert_eq!(wins, rule_wins(c));
        }
    }

    #[test]
    fn voluntary_rounds_are_certain_wins() {
        for c in [3, 4] {
            let team = best_classical_team(c).unwrap();
            let ctx = RoundContext { forced: false, ..forced_ctx() };
            let mut opportunities = 0;
            for a in enumerate_variations(c).unwrap() {
                let p = play_round(&team, &a, &ctx, 0);
                if a.counts().iter().all(|h| !h.has_half()) {
                    opportunities += 1;
                    assert!(p.played);
                    assert_eq!(p.win, Some(true), "{a}");
                } else {
                    assert!(!p.played);
                }
            }
            assert_eq!(opportunities, 1 << c);
        }
        let a = AppleAssignment::from_halves(&[0, 2, 2]).unwrap();
        let team = best_classical_team(3).unwrap();
        let p = play_round(&team, &a, &RoundContext { forced: false, ..forced_ctx() }, 0);
        assert_eq!(p.win, Some(true));
    }

    #[test]
    fn alice_integer_witness_wins_sixteen_voluntary_rounds() {
        let text = "\
            contestants 3
            accept 0 0 1
            accept 1 0 1/2 1 3/2
            accept 2 0 1/2 1 3/2
            message 1 0 1 1 0
            message 2 0 0 1 1
            decide 0 even odd
            decide 1/2 odd even
            decide 1 odd even
            decide 3/2 even odd
            decide-voluntary 0 even odd
            decide-voluntary 1 odd even
        ";
        let spec: ClassicalStrategySpec = text.parse().unwrap();
        let ctx = RoundContext { forced: false, ..forced_ctx() };
        let mut voluntary = 0;
        for a in enumerate_variations(3).unwrap() {
            let p = play_round(&spec, &a, &ctx, 0);
            if p.played {
                voluntary += 1;
                assert_eq!(p.win, Some(true), "{a}");
            }
        }
        assert_eq!(voluntary, 16);
    }

    #[test]
    fn parse_minimal_file() {
        let text = "\
            # naive
            contestants 3
            accept 0 0 1
            message 1 0 0 1 1
            message 2 0 0 1 1
            decide 0 even odd
            decide 1/2 odd even
            decide 1 odd even
            decide 3/2 even odd
        ";
        let spec: ClassicalStrategySpec = text.parse().unwrap();
        assert_eq!(spec.accept[0], [true, false, true, false]);
        assert_eq!(spec.accept[1], [false; 4]);
        assert_eq!(spec.voluntary_decision, spec.forced_decision);
        assert!(!spec.message(2, HalfInteger::HALF));
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = "contestants 3\nmessage 0 0 0 1 1\n".parse::<ClassicalStrategySpec>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = "contestants 3\nfrobnicate\n".parse::<ClassicalStrategySpec>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = "contestants 3\nmessage 1 0 0 1 1\n".parse::<ClassicalStrategySpec>().unwrap_err();
        assert!(err.to_string().contains("party 2"));
        assert!("contestants 5".parse::<ClassicalStrategySpec>().is_err());
    }

    fn arb_spec() -> impl Strategy<Value = ClassicalStrategySpec> {
        let parity = prop_oneof![Just(Parity::Even), Just(Parity::Odd)];
        let table = proptest::array::uniform4(proptest::array::uniform2(parity));
        (3usize..=4).prop_flat_map(move |c| {
            (
                proptest::collection::vec(proptest::array::uniform4(any::<bool>()), c),
                proptest::collection::vec(proptest::array::uniform4(any::<bool>()), c - 1),
                table.clone(),
                table.clone(),
            )
                .prop_map(move |(accept, messages, forced_decision, voluntary_decision)| {
                    ClassicalStrategySpec { contestants: c, accept, messages, forced_decision, voluntary_decision }
                })
        })
    }

    proptest! {
        #[test]
        fn text_format_round_trips(spec in arb_spec()) {
            let back: ClassicalStrategySpec = spec.to_text().parse().unwrap();
            prop_assert_eq!(back, spec);
        }
    }
}
