"""Compiled primitives shared by the scalar API and the Monte Carlo engine.

Every random quantity is a pure function of ``(master_seed, stream_index,
position)``: position ``j`` of a stream lives in Philox4x32-10 block ``j // 2``
(counter words 0-1 hold the block, words 2-3 the stream index, the key is the
master seed). Each block yields two 52-bit uniforms on the open interval (0, 1).

Consumers fill a buffer of uniforms for a position range and then transform
it, so the scalar API and the engine read identical values.
"""

import math

import numba as nb
import numpy as np

GAUSSIAN = 0
MIXTURE = 1
LAPLACIAN = 2

_MASK32 = np.uint64(0xFFFFFFFF)
_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint64(0x9E3779B9)
_W1 = np.uint64(0xBB67AE85)
_SHIFT32 = np.uint64(32)
_SHIFT6 = np.uint64(6)
_TWO26 = 67108864.0
_TWO_M52 = 2.0**-52

_jit = nb.njit(cache=True, nogil=True)


@_jit
def philox4x32(c0, c1, c2, c3, k0, k1):
    """Ten-round Philox4x32 on 32-bit words carried in uint64 lanes."""
    for i in range(10):
        if i > 0:
            k0 = (k0 + _W0) & _MASK32
            k1 = (k1 + _W1) & _MASK32
        p0 = _M0 * c0
        p1 = _M1 * c2
        hi0 = p0 >> _SHIFT32
        lo0 = p0 & _MASK32
        hi1 = p1 >> _SHIFT32
        lo1 = p1 & _MASK32
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
    return c0, c1, c2, c3


@_jit
def _to_unit(a, b):
    # 26 + 26 bits -> (k + 0.5) * 2**-52, strictly inside (0, 1)
    k = float(a >> _SHIFT6) * _TWO26 + float(b >> _SHIFT6)
    return (k + 0.5) * _TWO_M52


@_jit
def inv_norm(p):
    """Standard normal quantile (Wichura's AS241, as in ``statistics.NormalDist``)."""
    q = p - 0.5
    if math.fabs(q) <= 0.425:
        r = 0.180625 - q * q
        num = (((((((2.5090809287301226727e+3 * r +
                     3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r +
                     4.5921953931549871457e+4) * r +
                     1.3731693765509461125e+4) * r +
                     1.9715909503065514427e+3) * r +
                     1.3314166789178437745e+2) * r +
                     3.3871328727963666080e+0) * q
        den = (((((((5.2264952788528545610e+3 * r +
                     2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r +
                     2.1213794301586595867e+4) * r +
                     5.3941960214247511077e+3) * r +
                     6.8718700749205790830e+2) * r +
                     4.2313330701600911252e+1) * r +
                     1.0)
        return num / den
    r = p if q <= 0.0 else 1.0 - p
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r = r - 1.6
        num = (((((((7.74545014278341407640e-4 * r +
                     2.27238449892691845833e-2) * r +
                     2.41780725177450611770e-1) * r +
                     1.27045825245236838258e+0) * r +
                     3.64784832476320460504e+0) * r +
                     5.76949722146069140550e+0) * r +
                     4.63033784615654529590e+0) * r +
                     1.42343711074968357734e+0)
        den = (((((((1.05075007164441684324e-9 * r +
                     5.47593808499534494600e-4) * r +
                     1.51986665636164571966e-2) * r +
                     1.48103976427480074590e-1) * r +
                     6.89767334985100004550e-1) * r +
                     1.67638483018380384940e+0) * r +
                     2.05319162663775882187e+0) * r +
                     1.0)
    else:
        r = r - 5.0
        num = (((((((2.01033439929228813265e-7 * r +
                     2.71155556874348757815e-5) * r +
                     1.24266094738807843860e-3) * r +
                     2.65321895265761230930e-2) * r +
                     2.96560571828504891230e-1) * r +
                     1.78482653991729133580e+0) * r +
                     5.46378491116411436990e+0) * r +
                     6.65790464350110377720e+0)
        den = (((((((2.04426310338993978564e-15 * r +
                     1.42151175831644588870e-7) * r +
                     1.84631831751005468180e-5) * r +
                     7.86869131145613259100e-4) * r +
                     1.48753612908506148525e-2) * r +
                     1.36929880922735805310e-1) * r +
                     5.99832206555887937690e-1) * r +
                     1.0)
    x = num / den
    if q < 0.0:
        x = -x
    return x


@_jit
def fill_uniforms(out, idx, pos, k0, k1):
    """Uniforms at positions ``pos .. pos + len(out) - 1`` of stream ``idx``."""
    n = out.shape[0]
    if n == 0:
        return
    i0 = idx & _MASK32
    i1 = idx >> _SHIFT32
    p = np.uint64(pos)
    j = 0
    if p & np.uint64(1):
        block = p >> np.uint64(1)
        x0, x1, x2, x3 = philox4x32(block & _MASK32, block >> _SHIFT32, i0, i1, k0, k1)
        out[0] = _to_unit(x2, x3)
        j = 1
        p += np.uint64(1)
    while j < n:
        block = p >> np.uint64(1)
        x0, x1, x2, x3 = philox4x32(block & _MASK32, block >> _SHIFT32, i0, i1, k0, k1)
        out[j] = _to_unit(x0, x1)
        if j + 1 < n:
            out[j + 1] = _to_unit(x2, x3)
        j += 2
        p += np.uint64(2)


@_jit
def draws_per_sample(family):
    return 2 if family == MIXTURE else 1


@_jit
def transform_draws(out, mean, family, a, b, c, u):
    """``out[i] = mean + v_i`` from uniforms ``u`` (``draws_per_sample`` each).

    Parameters: Gaussian (sigma), mixture (p, sigma0, sigma1), Laplacian (scale).
    """
    n = out.shape[0]
    if family == GAUSSIAN:
        for i in range(n):
            out[i] = mean + a * inv_norm(u[i])
    elif family == MIXTURE:
        for i in range(n):
            scale = b if u[2 * i] < a else c
            out[i] = mean + scale * inv_norm(u[2 * i + 1])
    else:
        for i in range(n):
            h = u[i] - 0.5
            if h < 0.0:
                out[i] = mean + a * math.log1p(2.0 * h)
            else:
                out[i] = mean - a * math.log1p(-2.0 * h)


@_jit
def add_noise(out, sigma, u):
    for i in range(out.shape[0]):
        out[i] = out[i] + sigma * inv_norm(u[i])


@_jit
def moments(samples):
    s = 0.0
    ss = 0.0
    for i in range(samples.shape[0]):
        v = samples[i]
        s += v
        ss += v * v
    n = samples.shape[0]
    return s / n, ss / n


@_jit
def decide(mean, m2, th_m, th_v, compensated):
    stat = m2 - mean * mean if compensated else m2
    return (1 if mean > th_m else 0), (1 if stat > th_v else 0)


@_jit
def run_range(start, stop, k0, k1, n, m_low, m_high, low, high, sigma_w,
              th_m, th_v, compensated):
    """Error counts for symbols ``start .. stop - 1``.

    ``low``/``high`` are ``float64[4]`` rows of (family, a, b, c). Stream layout
    per symbol: two bit uniforms, the noise draws, then N channel normals
    (none when ``sigma_w == 0``).
    """
    buf = np.empty(n)
    u = np.empty(2 + 3 * n)
    err0 = 0
    err1 = 0
    for k in range(start, stop):
        idx = np.uint64(k)
        fill_uniforms(u[:2], idx, 0, k0, k1)
        b0 = 1 if u[0] < 0.5 else 0
        b1 = 1 if u[1] < 0.5 else 0
        model = high if b1 == 1 else low
        family = int(model[0])
        used = n * draws_per_sample(family)
        total = used + (n if sigma_w != 0.0 else 0)
        fill_uniforms(u[:total], idx, 2, k0, k1)
        transform_draws(buf, m_high if b0 == 1 else m_low, family,
                        model[1], model[2], model[3], u[:used])
        if sigma_w != 0.0:
            add_noise(buf, sigma_w, u[used:total])
        mhat, m2 = moments(buf)
        d0, d1 = decide(mhat, m2, th_m, th_v, compensated)
        err0 += d0 != b0
        err1 += d1 != b1
    return err0, err1
