import { readFileSync } from 'fs'

export interface DetBox {
  frame: number
  /** 0-based position among the frame's detections, in file order */
  index: number
  left: number
  top: number
  w: number
  h: number
}

/**
 * Parse a detection file (`frame,id,left,top,w,h,conf,x,y,z`). Indices are
 * assigned by line order within each frame, matching the tracker's reader.
 */
export function parseDetections(path: string): DetBox[] {
  const out: DetBox[] = []
  const counts = new Map<number, number>()
  const lines = readFileSync(path, 'utf8').split('\n')
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim()
    if (!line) continue
    const fields = line.split(',')
    if (fields.length !== 10) {
      throw new Error(`${path}:${i + 1}: expected 10 fields, got ${fields.length}`)
    }
    const frame = parseInt(fields[0], 10)
    const left = parseFloat(fields[2])
    const top = parseFloat(fields[3])
    const w = parseFloat(fields[4])
    const h = parseFloat(fields[5])
    if (!Number.isFinite(frame) || [left, top, w, h].some((v) => !Number.isFinite(v))) {
      throw new Error(`${path}:${i + 1}: malformed detection record`)
    }
    const index = counts.get(frame) ?? 0
    counts.set(frame, index + 1)
    out.push({ frame, index, left, top, w, h })
  }
  return out
}
