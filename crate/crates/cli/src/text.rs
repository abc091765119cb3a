//! Human-readable summary of a report.

use std::fmt::Write;

use crate::report::{Real, Report};

fn num(x: Real) -> String {
    format!("{:.6e}", x.0)
}

fn list(xs: &[Real]) -> String {
    xs.iter().map(|&x| format!("{:.6}", x.0)).collect::<Vec<_>>().join(", ")
}

pub fn summary(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {} ({})", r.command, r.input, r.input_digest);
    if let Some(d) = &r.decomposition {
        let v = &d.verdicts;
        let _ = writeln!(s, "  dimension            {}", d.dim);
        let _ = writeln!(s, "  trace preserving     {} (residual {})", v.is_tp.holds, num(v.is_tp.residual));
        let _ = writeln!(s, "  hermiticity pres.    {} (residual {})", v.is_hp.holds, num(v.is_hp.residual));
        let _ = writeln!(
            s,
            "  completely positive  {} (min Choi eigenvalue {})",
            v.is_cp.holds,
            num(v.is_cp.min_choi_eigenvalue)
        );
        let _ = writeln!(s, "  Choi eigenvalues     [{}]", list(&d.choi_eigenvalues));
        let _ = writeln!(s, "  l+ / l-              {} / {}", d.l_plus, d.l_minus);
        let _ = writeln!(s, "  J min eigenvalue     {}", num(d.j_min_eig));
        let _ = writeln!(s, "  K rank               {}", d.k_rank);
        let _ = writeln!(s, "  extension dim        {}", d.extension_dim);
        let _ = writeln!(s, "  dilation dim         {}", d.dilation_dim);
        let _ = writeln!(s, "  reconstruction       {} ({})", num(d.reconstruction_residual), r.variant);
        let _ = writeln!(s, "  annihilation max     {}", num(d.annihilation_residuals.max));
    }
    if let Some(v) = &r.verification {
        let _ = writeln!(
            s,
            "  verification         {} over {} samples, seed {}: max residual {}",
            if v.passed { "passed" } else { "FAILED" },
            v.samples,
            v.seed,
            num(v.max_reconstruction_residual)
        );
    }
    if let Some(d) = &r.dilation {
        let _ = writeln!(s, "  unitary              {0}x{0}, ancilla dim {1}", d.system_dim * d.ancilla_dim, d.ancilla_dim);
        let _ = writeln!(s, "  unitarity residual   {}", num(d.unitarity_residual));
        let _ = writeln!(s, "  round trip residual  {}", num(d.round_trip_residual));
    }
    if let Some(w) = &r.witness {
        let _ = writeln!(s, "  verdict              {}", w.verdict);
        let _ = writeln!(s, "  purity               {}", num(w.purity));
        let _ = writeln!(s, "  schmidt rank         {}", w.schmidt_rank);
        let _ = writeln!(s, "  weights              [{}]", list(&w.weights));
    }
    if let Some(e) = &r.extraction {
        let _ = writeln!(
            s,
            "  extracted map        completely positive {} (min Choi eigenvalue {})",
            e.is_cp.holds,
            num(e.is_cp.min_choi_eigenvalue)
        );
        let _ = writeln!(s, "  consistency residual {}", num(e.consistency_residual));
    }
    s
}
