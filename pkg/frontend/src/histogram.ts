import { Image } from './ppm.js'

export interface HistBins {
  h: number
  s: number
  v: number
}

export const DEFAULT_BINS: HistBins = { h: 8, s: 8, v: 4 }

/** RGB in [0,255] -> [h in [0,1), s in [0,1], v in [0,1]] */
export function rgbToHsv(r: number, g: number, b: number): [number, number, number] {
  const rn = r / 255
  const gn = g / 255
  const bn = b / 255
  const max = Math.max(rn, gn, bn)
  const min = Math.min(rn, gn, bn)
  const d = max - min
  let h = 0
  if (d > 0) {
    if (max === rn) h = ((gn - bn) / d) % 6
    else if (max === gn) h = (bn - rn) / d + 2
    else h = (rn - gn) / d + 4
    h /= 6
    if (h < 0) h += 1
  }
  const s = max === 0 ? 0 : d / max
  return [h, s, max]
}

/** Raw (unnormalized) HSV bin counts of a crop, flattened h-major. */
export function hsvHistogram(crop: Image, bins: HistBins = DEFAULT_BINS): Float64Array {
  const hist = new Float64Array(bins.h * bins.s * bins.v)
  const n = crop.width * crop.height
  for (let i = 0; i < n; i++) {
    const [h, s, v] = rgbToHsv(crop.data[3 * i], crop.data[3 * i + 1], crop.data[3 * i + 2])
    const hi = Math.min(bins.h - 1, Math.floor(h * bins.h))
    const si = Math.min(bins.s - 1, Math.floor(s * bins.s))
    const vi = Math.min(bins.v - 1, Math.floor(v * bins.v))
    hist[(hi * bins.s + si) * bins.v + vi]++
  }
  return hist
}

/** L1-normalize then L2-normalize, matching the tracker's loading convention. */
export function normalizeHistogram(hist: Float64Array): Float64Array {
  const out = Float64Array.from(hist)
  let l1 = 0
  for (const v of out) l1 += Math.abs(v)
  if (l1 === 0) throw new Error('zero histogram')
  for (let i = 0; i < out.length; i++) out[i] /= l1
  let l2 = 0
  for (const v of out) l2 += v * v
  l2 = Math.sqrt(l2)
  for (let i = 0; i < out.length; i++) out[i] /= l2
  return out
}
