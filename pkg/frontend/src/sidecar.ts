import { writeFileSync } from 'fs'

export interface FeatureRecord {
  frame: number
  index: number
  values: Float64Array | number[]
}

/** Write the feature sidecar: `D <dim>` header, then `frame,index,v1,...,vD`. */
export function writeSidecar(path: string, dim: number, records: FeatureRecord[]): void {
  const lines = [`D ${dim}`]
  for (const r of records) {
    if (r.values.length !== dim) {
      throw new Error(`feature dimension mismatch: expected ${dim}, got ${r.values.length}`)
    }
    const values = Array.from(r.values, (v) => v.toFixed(8)).join(',')
    lines.push(`${r.frame},${r.index},${values}`)
  }
  writeFileSync(path, lines.join('\n') + '\n')
}
