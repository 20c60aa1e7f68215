import { Image } from './ppm.js'

/**
 * Cut a detection box out of a frame, clamped to the image bounds.
 * Returns null when the box lies fully outside the frame.
 */
export function cropBox(image: Image, left: number, top: number, w: number, h: number): Image | null {
  const x0 = Math.max(0, Math.floor(left))
  const y0 = Math.max(0, Math.floor(top))
  const x1 = Math.min(image.width, Math.ceil(left + w))
  const y1 = Math.min(image.height, Math.ceil(top + h))
  if (x1 <= x0 || y1 <= y0) return null
  const cw = x1 - x0
  const ch = y1 - y0
  const out = new Uint8Array(cw * ch * 3)
  for (let y = 0; y < ch; y++) {
    const src = ((y0 + y) * image.width + x0) * 3
    out.set(image.data.subarray(src, src + cw * 3), y * cw * 3)
  }
  return { width: cw, height: ch, data: out }
}
