//! Generative property tests for the spec'd invariants: filter linearity
//! and shift equivariance, peak-list invariants, estimator identities,
//! test-statistic symmetries, suggestion totality, and format round-trips.

use proptest::prelude::*;

use comfort_core::garment::{Fabric, Fit};
use comfort_core::io::{read_signal_csv, write_signal_csv};
use comfort_core::signal::{detrend, find_peaks, low_pass, moving_average, TimeSeries};
use comfort_core::stats::{box_summary, descriptive, paired_t_test, pearson};
use comfort_core::suggest::{
    emotion_score, suggest_garment, Activity, ComfortContext, ComfortReading, EmotionResponse,
    NegativeItem, PositiveItem, HR_ELEVATION_THRESHOLD,
};
use comfort_core::vitals::{rate_from_peaks, RateEstimate};
use comfort_core::PeakList;

fn series(samples: Vec<f64>, fs: f64) -> TimeSeries {
    TimeSeries::new(samples, fs).unwrap()
}

fn signal_strategy(len: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-10.0..10.0f64, len)
}

proptest! {
    #[test]
    fn low_pass_is_linear(
        x in signal_strategy(300),
        y in signal_strategy(300),
        a in -4.0..4.0f64,
        b in -4.0..4.0f64,
    ) {
        let fs = 100.0;
        let combined: Vec<f64> = x.iter().zip(&y).map(|(u, v)| a * u + b * v).collect();
        let lhs = low_pass(&series(combined, fs), 12.0).unwrap();
        let fx = low_pass(&series(x, fs), 12.0).unwrap();
        let fy = low_pass(&series(y, fs), 12.0).unwrap();
        let scale = 10.0 * (a.abs() + b.abs()) + 1.0;
        for i in 0..lhs.len() {
            let rhs = a * fx.samples()[i] + b * fy.samples()[i];
            prop_assert!((lhs.samples()[i] - rhs).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn low_pass_shift_equivariant_in_interior(
        x in signal_strategy(400),
        shift in 1usize..40,
    ) {
        let fs = 100.0;
        let taps = comfort_core::signal::low_pass_filter_len(fs, 10.0);
        let shifted: Vec<f64> = x[shift..].to_vec();
        let full = low_pass(&series(x.clone(), fs), 10.0).unwrap();
        let moved = low_pass(&series(shifted, fs), 10.0).unwrap();
        // Compare where both convolutions see only real samples.
        let margin = (taps - 1) / 2;
        for i in margin..moved.len().saturating_sub(margin) {
            prop_assert!(
                (full.samples()[i + shift] - moved.samples()[i]).abs() < 1e-9,
                "index {i}"
            );
        }
    }

    #[test]
    fn moving_average_fixes_constants(c in -1e6..1e6f64, len in 3usize..200) {
        let window = (1..=len).rev().find(|w| w % 2 == 1).unwrap();
        let out = moving_average(&series(vec![c; len], 100.0), window).unwrap();
        for &v in out.samples() {
            prop_assert_eq!(v, c);
        }
    }

    #[test]
    fn detrend_is_idempotent_on_baseline_free_signals(
        cycles_per_window in 1usize..4,
        phase in 0.0..std::f64::consts::TAU,
        amp in 0.5..10.0f64,
    ) {
        // A sinusoid with an integer number of cycles per baseline window
        // has zero moving-window sums, so it is already baseline-free in
        // the doubly-interior region.
        let fs = 50.0;
        let window_s = 1.02; // 51 samples
        let w = 51usize;
        let freq = cycles_per_window as f64 * fs / w as f64;
        let n = 600;
        let x: Vec<f64> = (0..n)
            .map(|i| amp * (std::f64::consts::TAU * freq * i as f64 / fs + phase).sin())
            .collect();
        let once = detrend(&series(x, fs), window_s).unwrap();
        let twice = detrend(&once, window_s).unwrap();
        for i in w..n - w {
            prop_assert!(
                (twice.samples()[i] - once.samples()[i]).abs() <= 1e-6 * amp,
                "index {i}: {} vs {}",
                twice.samples()[i],
                once.samples()[i]
            );
        }
    }

    #[test]
    fn find_peaks_respects_peaklist_invariants(
        x in signal_strategy(250),
        min_distance_s in 0.0..0.5f64,
        min_prominence in 0.0..2.0f64,
    ) {
        let fs = 50.0;
        let peaks = find_peaks(&series(x, fs), min_distance_s, min_prominence).unwrap();
        let min_gap = min_distance_s * fs;
        for pair in peaks.indices().windows(2) {
            prop_assert!(pair[1] > pair[0]);
            prop_assert!((pair[1] - pair[0]) as f64 >= min_gap);
        }
        for &i in peaks.indices() {
            prop_assert!(i < 250);
        }
    }

    #[test]
    fn find_peaks_offset_and_scale_invariance(
        x in signal_strategy(250),
        offset in -100.0..100.0f64,
        scale_pow in -3i32..7,
    ) {
        let fs = 50.0;
        let baseline = find_peaks(&series(x.clone(), fs), 0.1, 0.4).unwrap();
        let shifted: Vec<f64> = x.iter().map(|v| v + offset).collect();
        let shifted_peaks = find_peaks(&series(shifted, fs), 0.1, 0.4).unwrap();
        prop_assert_eq!(baseline.indices(), shifted_peaks.indices());

        // Powers of two scale the samples exactly, so co-scaling the
        // prominence threshold reproduces the same indices bit-for-bit.
        let k = 2.0f64.powi(scale_pow);
        let scaled: Vec<f64> = x.iter().map(|v| v * k).collect();
        let scaled_peaks = find_peaks(&series(scaled, fs), 0.1, 0.4 * k).unwrap();
        prop_assert_eq!(baseline.indices(), scaled_peaks.indices());
    }

    #[test]
    fn rate_is_sixty_over_mean_interval(
        gaps in proptest::collection::vec(30usize..300, 3..20),
    ) {
        let fs = 100.0;
        let mut indices = vec![0usize];
        for g in &gaps {
            indices.push(indices.last().unwrap() + g);
        }
        let len = indices.last().unwrap() + 1;
        let peaks = PeakList::new(indices, len, fs).unwrap();
        if let Ok(est) = rate_from_peaks(&peaks, 0.3, 3.0) {
            let mean = est.intervals_s().iter().sum::<f64>() / est.intervals_s().len() as f64;
            let rel = (est.rate_per_min() - 60.0 / mean).abs() / est.rate_per_min();
            prop_assert!(rel < 1e-12);
            prop_assert_eq!(
                est.n_peaks(),
                est.intervals_s().len() + est.rejected_intervals() + 1
            );
        }
    }

    #[test]
    fn paired_t_antisymmetry_and_translation_invariance(
        x in proptest::collection::vec(-50.0..50.0f64, 3..12),
        y in proptest::collection::vec(-50.0..50.0f64, 3..12),
        c in -100.0..100.0f64,
    ) {
        let n = x.len().min(y.len());
        let (x, y) = (&x[..n], &y[..n]);
        if let (Ok(ab), Ok(ba)) = (paired_t_test(x, y), paired_t_test(y, x)) {
            prop_assert_eq!(ab.t_stat, -ba.t_stat);
            prop_assert_eq!(ab.p_one_tail, ba.p_one_tail);

            let xs: Vec<f64> = x.iter().map(|v| v + c).collect();
            let ys: Vec<f64> = y.iter().map(|v| v + c).collect();
            if let Ok(translated) = paired_t_test(&xs, &ys) {
                prop_assert!((translated.t_stat - ab.t_stat).abs() <= 1e-10 * (1.0 + ab.t_stat.abs()));
                prop_assert!((translated.pearson_r - ab.pearson_r).abs() <= 1e-10);
                prop_assert!((translated.p_one_tail - ab.p_one_tail).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn variance_is_squared_std_dev(
        x in proptest::collection::vec(-1000.0..1000.0f64, 2..30),
    ) {
        let d = descriptive(&x).unwrap();
        let rel = (d.variance - d.std_dev * d.std_dev).abs() / d.variance.max(1e-300);
        prop_assert!(rel <= 1e-12 || d.variance == 0.0);
    }

    #[test]
    fn box_summary_is_ordered(
        x in proptest::collection::vec(0.1..200.0f64, 2..40),
    ) {
        let b = box_summary(&x).unwrap();
        prop_assert!(b.min <= b.q1 && b.q1 <= b.median && b.median <= b.q3 && b.q3 <= b.max);
    }

    #[test]
    fn pearson_affine_invariance(
        x in proptest::collection::vec(-20.0..20.0f64, 3..15),
        y in proptest::collection::vec(-20.0..20.0f64, 3..15),
        a in 0.01..8.0f64,
        b in -30.0..30.0f64,
    ) {
        let n = x.len().min(y.len());
        let (x, y) = (&x[..n], &y[..n]);
        if let Ok(r) = pearson(x, y) {
            let tx: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            prop_assert!((pearson(&tx, y).unwrap() - r).abs() <= 1e-10);
            let nx: Vec<f64> = x.iter().map(|v| -a * v + b).collect();
            prop_assert!((pearson(&nx, y).unwrap() + r).abs() <= 1e-10);
        }
    }

    #[test]
    fn suggestion_is_total_and_deterministic(
        temp in -40.0..=60.0f64,
        humidity in 0.0..=100.0f64,
        activity_idx in 0usize..3,
        wear in 0.0..48.0f64,
        hr in 30.0..=180.0f64,
        rr in 6.0..=30.0f64,
        baseline in proptest::option::of(40.0..140.0f64),
        emotion in proptest::option::of(-1.0..=1.0f64),
    ) {
        let activity = [Activity::Rest, Activity::Moderate, Activity::Intense][activity_idx];
        let ctx = ComfortContext::new(temp, humidity, activity, wear).unwrap();
        let reading = ComfortReading::new(estimate(hr), estimate(rr), baseline).unwrap();
        let one = suggest_garment(&reading, &ctx, emotion).unwrap();
        let two = suggest_garment(&reading, &ctx, emotion).unwrap();
        prop_assert_eq!(&one, &two);
        prop_assert!(["R1", "R2", "R3", "R4"].contains(&one.rule_id.as_str()));
        prop_assert!(!one.rationale.is_empty());
    }

    #[test]
    fn r1_boundary_is_monotonic_in_heart_rate(
        temp in -40.0..=60.0f64,
        humidity in 0.0..=100.0f64,
        activity_idx in 0usize..2, // rest or moderate; intense is R1 anyway
        baseline in 50.0..120.0f64,
        below_frac in 0.5..0.999f64,
        above_frac in 1.001..1.4f64,
    ) {
        let activity = [Activity::Rest, Activity::Moderate][activity_idx];
        let ctx = ComfortContext::new(temp, humidity, activity, 1.0).unwrap();
        let below = (baseline * (1.0 + HR_ELEVATION_THRESHOLD) * below_frac).clamp(30.0, 180.0);
        let above = (baseline * (1.0 + HR_ELEVATION_THRESHOLD) * above_frac).clamp(30.0, 180.0);
        prop_assume!(above >= baseline * (1.0 + HR_ELEVATION_THRESHOLD));
        let low = suggest_garment(
            &ComfortReading::new(estimate(below), estimate(15.0), Some(baseline)).unwrap(),
            &ctx,
            None,
        )
        .unwrap();
        let high = suggest_garment(
            &ComfortReading::new(estimate(above), estimate(15.0), Some(baseline)).unwrap(),
            &ctx,
            None,
        )
        .unwrap();
        // Crossing the elevation threshold upward never switches the
        // fabric away from the polyester blend.
        prop_assert!(
            !(low.fabric == Fabric::PolyesterBlend && high.fabric == Fabric::CottonBlend)
        );
        prop_assert_eq!(high.fabric, Fabric::PolyesterBlend);
        prop_assert_eq!(high.fit, Fit::Loose);
    }

    #[test]
    fn signal_csv_round_trip_is_text_stable(
        samples in proptest::collection::vec(-1e6..1e6f64, 1..200),
        fs in 1.0..1000.0f64,
    ) {
        let ts = series(samples, fs);
        let mut first = Vec::new();
        write_signal_csv(&mut first, &ts).unwrap();
        let parsed = read_signal_csv(first.as_slice()).unwrap();
        let mut second = Vec::new();
        write_signal_csv(&mut second, &parsed).unwrap();
        prop_assert_eq!(first, second);
    }
}

fn estimate(rate: f64) -> RateEstimate {
    let interval = 60.0 / rate;
    RateEstimate::from_intervals(vec![interval, interval], 3, 0).unwrap()
}

#[test]
fn emotion_score_bounds_exhaustive() {
    // All 64 subset combinations of the two three-item vocabularies.
    let positives = [
        PositiveItem::Soft,
        PositiveItem::Comfortable,
        PositiveItem::Relaxed,
    ];
    let negatives = [
        NegativeItem::Stiff,
        NegativeItem::Itchy,
        NegativeItem::Annoyed,
    ];
    for p_mask in 0u8..8 {
        for n_mask in 0u8..8 {
            let mut response = EmotionResponse::default();
            for (bit, item) in positives.iter().enumerate() {
                if p_mask & (1 << bit) != 0 {
                    response.positive_items.insert(*item);
                }
            }
            for (bit, item) in negatives.iter().enumerate() {
                if n_mask & (1 << bit) != 0 {
                    response.negative_items.insert(*item);
                }
            }
            let score = emotion_score(&response);
            assert!((-1.0..=1.0).contains(&score));
            let expected = (p_mask.count_ones() as f64 - n_mask.count_ones() as f64) / 3.0;
            assert_eq!(score, expected);
        }
    }
}
