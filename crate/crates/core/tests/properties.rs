//! Property-based invariants over the geometry and metric primitives.

use proptest::prelude::*;

use vsatrack::dsp::bin_to_velocity;
use vsatrack::geometry::{
    project_velocity, resolve_ambiguity, synthesize_velocity_lstsq, synthesize_velocity_thales,
    trilaterate, RadialVelocityVector, RoomBounds,
};
use vsatrack::montecarlo::{error_cdf, rmse};
use vsatrack::scenario::{radar_frame_times, RadarNode, WaveformParams};
use vsatrack::types::{Point2, Vec2};

fn unit(angle: f64) -> Vec2 {
    Vec2::new(angle.cos(), angle.sin())
}

proptest! {
    #[test]
    fn velocity_round_trip_exact(
        speed in 0.01f64..1.5,
        heading in 0.0f64..std::f64::consts::TAU,
        a1 in 0.0f64..std::f64::consts::TAU,
        separation in 0.05f64..(std::f64::consts::PI - 0.05),
    ) {
        let v = unit(heading) * speed;
        let u1 = unit(a1);
        let u2 = unit(a1 + separation);
        let rv1 = RadialVelocityVector::new(project_velocity(v, u1), u1);
        let rv2 = RadialVelocityVector::new(project_velocity(v, u2), u2);
        let synth = synthesize_velocity_thales(&rv1, &rv2).unwrap();
        prop_assert!((synth - v).norm() <= 1e-9 * v.norm());
        // Chord no longer than the diameter.
        prop_assert!(rv1.as_vector().norm() <= synth.norm() + 1e-12);
        prop_assert!(rv2.as_vector().norm() <= synth.norm() + 1e-12);
    }

    #[test]
    fn thales_equals_lstsq_for_two_radars(
        speed in 0.01f64..1.5,
        heading in 0.0f64..std::f64::consts::TAU,
        a1 in 0.0f64..std::f64::consts::TAU,
        separation in 0.1f64..(std::f64::consts::PI - 0.1),
        range1 in 0.5f64..5.0,
        range2 in 0.5f64..5.0,
    ) {
        let v = unit(heading) * speed;
        let u1 = unit(a1);
        let u2 = unit(a1 + separation);
        let target = Point2::new(2.5, 3.0);
        let radars = [target - u1 * range1, target - u2 * range2];
        let speeds = [project_velocity(v, u1), project_velocity(v, u2)];
        let ls = synthesize_velocity_lstsq(target, &radars, &speeds).unwrap();
        let rv1 = RadialVelocityVector::new(speeds[0], u1);
        let rv2 = RadialVelocityVector::new(speeds[1], u2);
        let th = synthesize_velocity_thales(&rv1, &rv2).unwrap();
        prop_assert!((ls - th).norm() <= 1e-9 * v.norm().max(1.0));
    }

    #[test]
    fn trilateration_round_trip_contains_target(
        x in 0.05f64..4.95,
        y in 0.05f64..5.95,
    ) {
        let r1 = Point2::new(2.0, 0.0);
        let r2 = Point2::new(0.0, 2.0);
        let p = Point2::new(x, y);
        prop_assume!((p - r1).norm() > 1e-3 && (p - r2).norm() > 1e-3);
        let sols = trilaterate((p - r1).norm(), (p - r2).norm(), r1, r2).unwrap();
        let best = sols.iter().map(|s| (*s - p).norm()).fold(f64::INFINITY, f64::min);
        prop_assert!(best <= 1e-9);
    }

    #[test]
    fn resolve_ambiguity_invariant_under_distance_scaling(
        ax in 1.5f64..3.5, ay in 2.0f64..4.0,
        bx in 1.5f64..3.5, by in 2.0f64..4.0,
        px in 1.5f64..3.5, py in 2.0f64..4.0,
        scale in 0.25f64..1.75,
    ) {
        // Scaling all candidate offsets around the reference point uniformly
        // must not change which candidate wins.
        let bounds = RoomBounds::indoor_default();
        let previous = Point2::new(px, py);
        let a = Point2::new(ax, ay);
        let b = Point2::new(bx, by);
        prop_assume!(((a - previous).norm() - (b - previous).norm()).abs() > 1e-9);

        let scaled_a = previous + (a - previous) * scale;
        let scaled_b = previous + (b - previous) * scale;
        prop_assume!(bounds.contains(scaled_a) && bounds.contains(scaled_b));

        let base = resolve_ambiguity(&[a, b], &bounds, Some(previous)).unwrap();
        let scaled = resolve_ambiguity(&[scaled_a, scaled_b], &bounds, Some(previous)).unwrap();
        let base_won_a = base == a;
        let scaled_won_a = scaled == scaled_a;
        prop_assert_eq!(base_won_a, scaled_won_a);
    }

    #[test]
    fn frame_times_shift_by_offset(
        offset in -0.2f64..0.2,
        n in 1usize..64,
    ) {
        let wf = WaveformParams::indoor_default();
        let mut radar = RadarNode::new(1, Point2::new(2.0, 0.0), wf);
        let base = radar_frame_times(&radar, n);
        radar.clock_offset = offset;
        let shifted = radar_frame_times(&radar, n);
        for (a, b) in base.iter().zip(&shifted) {
            prop_assert!((b - a - offset).abs() < 1e-12);
        }
    }

    #[test]
    fn rmse_of_constant_list_is_constant(
        c in 0.0f64..10.0,
        n in 1usize..100,
    ) {
        let errors = vec![c; n];
        prop_assert!((rmse(&errors).unwrap() - c).abs() < 1e-12);
    }

    #[test]
    fn cdf_is_monotone_and_ends_at_one(
        errors in prop::collection::vec(0.0f64..10.0, 1..200),
        n_points in 1usize..50,
    ) {
        let cdf = error_cdf(&errors, n_points).unwrap();
        for pair in cdf.windows(2) {
            prop_assert!(pair[1].0 >= pair[0].0);
            prop_assert!(pair[1].1 >= pair[0].1);
        }
        let (_, last_fraction) = *cdf.last().unwrap();
        prop_assert!((last_fraction - 1.0).abs() < 1e-12);
    }

    #[test]
    fn doppler_bin_conversion_is_linear(p in -128i64..128) {
        let wf = WaveformParams::indoor_default();
        let direct = bin_to_velocity(p, &wf);
        let scaled = p as f64 * bin_to_velocity(1, &wf);
        prop_assert!((direct - scaled).abs() <= 1e-12);
    }
}
