//! Cross-check every closed-form derivative against central finite
//! differences of the loss, including the unrolled generator gradient that
//! differentiates through k discriminator ascent steps.

use ganmix::gaussmix::MixtureParams;
use ganmix::loss::{
    grad_discriminator, gradients, loss_value, unrolled_generator_grad, EndpointVector,
};

const FD_STEP: f64 = 1e-6;
const ETA_D: f64 = 0.1;

fn central<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    (f(x + FD_STEP) - f(x - FD_STEP)) / (2.0 * FD_STEP)
}

fn row(name: &str, analytic: f64, fd: f64) {
    println!(
        "  {name:<12} analytic {analytic:>15.10}   finite-diff {fd:>15.10}   |diff| {:.2e}",
        (analytic - fd).abs()
    );
}

fn main() {
    let target = MixtureParams::new(-0.7, 0.9).unwrap();
    let mu = [-1.3, 1.8];
    let d = EndpointVector::new(-2.1, -0.4, 0.3, 2.2);

    println!("loss at the probe point: {:.12}", loss_value(target, mu, d));
    println!();

    let g = gradients(target, mu, d);
    println!("generator partials:");
    row(
        "d/d mu_1",
        g.d_mu[0],
        central(|x| loss_value(target, [x, mu[1]], d), mu[0]),
    );
    row(
        "d/d mu_2",
        g.d_mu[1],
        central(|x| loss_value(target, [mu[0], x], d), mu[1]),
    );

    println!("discriminator partials:");
    let (dl, dr) = grad_discriminator(target, mu, d);
    let arr = d.as_array();
    let names = ["d/d l1", "d/d r1", "d/d l2", "d/d r2"];
    let analytic = [dl[0], dr[0], dl[1], dr[1]];
    for i in 0..4 {
        let fd = central(
            |x| {
                let mut a = arr;
                a[i] = x;
                loss_value(target, mu, EndpointVector::from_array(a))
            },
            arr[i],
        );
        row(names[i], analytic[i], fd);
    }

    // Unrolled: the generator sees the endpoints as a function of its own
    // parameters (each mean shift moves the discriminator's next k ascent
    // steps) and differentiates through that dependence.
    for k in [0, 1, 5] {
        println!("unrolled generator gradient, k = {k}:");
        let g = unrolled_generator_grad(target, mu, d, k, ETA_D, [false; 2]);
        for j in 0..2 {
            let fd = central(
                |x| {
                    let mut m = mu;
                    m[j] = x;
                    // Re-run the k ascent steps from the probe mean, then
                    // evaluate the loss at the resulting endpoints.
                    let mut e = d.as_array();
                    for _ in 0..k {
                        let (sl, sr) =
                            grad_discriminator(target, m, EndpointVector::from_array(e));
                        e[0] += ETA_D * sl[0];
                        e[1] += ETA_D * sr[0];
                        e[2] += ETA_D * sl[1];
                        e[3] += ETA_D * sr[1];
                    }
                    loss_value(target, m, EndpointVector::from_array(e))
                },
                mu[j],
            );
            row(if j == 0 { "d/d mu_1" } else { "d/d mu_2" }, g[j], fd);
        }
    }
}
