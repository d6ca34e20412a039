mod common;

use common::*;
use homfill::builders::{cayley_ball, estimate_delta, rips_complex, DeltaMode, Presentation};
use homfill::hypfill::{linear_bound, linear_fill, HyperbolicContext};
use homfill::profiler::cycles;
use homfill::{Chain, Complex, Error};
use num_rational::{BigRational, Rational64};

fn check_trace(cx: &Complex, z: &Chain, ctx: &HyperbolicContext) {
    let (r, t) = linear_fill(ctx, z).unwrap();
    assert_eq!(cx.boundary(&r.filling).unwrap(), *z);
    let mut cur = z.clone();
    for s in &t.steps {
        let next = cur.sub(&cx.boundary(&s.chain).unwrap());
        assert!(cx.is_cycle(&next).unwrap());
        assert_eq!(s.norm_before, cur.l1_norm());
        assert_eq!(s.norm_after, next.l1_norm());
        assert!(s.norm_after <= s.norm_before);
        if s.case == 1 {
            assert!(s.norm_after < s.norm_before);
        }
        cur = next;
    }
    assert!(cur.is_zero());
    let used: usize = t.steps.iter().map(|s| s.chain.support_len()).sum();
    let bound = linear_bound(ctx) as usize * z.support_len();
    assert!(used <= bound);
    assert!(r.norm <= BigRational::from_integer(bound.into()));
}

#[test]
fn free_group_rips_traces() {
    let (_, m) = cayley_ball(&Presentation::free(2).unwrap(), 5).unwrap();
    assert_eq!(estimate_delta(&m, DeltaMode::exact()).unwrap().delta, Rational64::from_integer(0));
    let cx = rips_complex(&m, Rational64::from_integer(3), 2).unwrap();
    let ctx = HyperbolicContext::new(&cx, Rational64::from_integer(0), Rational64::from_integer(1), 0).unwrap();
    for z in cycles::random_walk_cycles(&cx, zdisc(), 10, 40, 11, None).unwrap() {
        check_trace(&cx, &z, &ctx);
    }
}

#[test]
fn pentagon_cactus_traces() {
    let p = Presentation::new(&['a', 'b'], &["aaaaa", "bbbbb"]).unwrap();
    let (_, m) = cayley_ball(&p, 4).unwrap();
    let delta = estimate_delta(&m, DeltaMode::exact()).unwrap().delta;
    let cx = rips_complex(&m, Rational64::from_integer(5), 2).unwrap();
    let ctx = HyperbolicContext::new(&cx, delta, Rational64::from_integer(1), 0).unwrap();
    let mut case3 = 0;
    for z in cycles::random_walk_cycles(&cx, zdisc(), 12, 300, 7, None).unwrap() {
        check_trace(&cx, &z, &ctx);
        case3 += linear_fill(&ctx, &z).unwrap().1.case_counts()[2];
    }
    assert!(case3 > 0);
}

#[test]
fn threshold_gate() {
    let (_, m) = cayley_ball(&Presentation::free(2).unwrap(), 2).unwrap();
    let cx = rips_complex(&m, Rational64::from_integer(2), 2).unwrap();
    let e = HyperbolicContext::new(&cx, Rational64::from_integer(0), Rational64::from_integer(1), 0);
    assert!(matches!(e, Err(Error::Config(m)) if m.contains("4*delta + 2*epsilon")));
}
