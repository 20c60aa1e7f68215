import * as tf from '@tensorflow/tfjs'
import { readFileSync, writeFileSync, mkdirSync } from 'fs'
import { join } from 'path'
import { Image } from './ppm.js'

/** Re-ID convention: crops are resized to 256 (h) x 128 (w) before inference. */
export const INPUT_HEIGHT = 256
export const INPUT_WIDTH = 128

function toArrayBuffer(data: ArrayBuffer | ArrayBuffer[] | undefined): ArrayBuffer {
  if (data === undefined) throw new Error('model has no weight data')
  if (Array.isArray(data)) {
    const total = data.reduce((n, b) => n + b.byteLength, 0)
    const out = new Uint8Array(total)
    let off = 0
    for (const b of data) {
      out.set(new Uint8Array(b), off)
      off += b.byteLength
    }
    return out.buffer
  }
  return data
}

/**
 * Filesystem IOHandler for tf.js model directories (model.json + weight
 * shards). The browser build of tfjs has no file:// scheme, so loading and
 * saving go through this handler.
 */
export function fileIOHandler(dir: string): tf.io.IOHandler {
  return {
    async load() {
      const modelJSON = JSON.parse(readFileSync(join(dir, 'model.json'), 'utf8'))
      return tf.io.getModelArtifactsForJSON(modelJSON, async (manifest) => {
        const specs: tf.io.WeightsManifestEntry[] = []
        const buffers: ArrayBuffer[] = []
        for (const group of manifest) {
          specs.push(...group.weights)
          for (const p of group.paths) {
            const b = readFileSync(join(dir, p))
            buffers.push(b.buffer.slice(b.byteOffset, b.byteOffset + b.byteLength))
          }
        }
        return [specs, toArrayBuffer(buffers)]
      })
    },
    async save(artifacts: tf.io.ModelArtifacts) {
      mkdirSync(dir, { recursive: true })
      const weightData = toArrayBuffer(artifacts.weightData)
      writeFileSync(join(dir, 'weights.bin'), Buffer.from(weightData))
      const modelJSON = {
        modelTopology: artifacts.modelTopology,
        format: artifacts.format,
        generatedBy: artifacts.generatedBy,
        convertedBy: artifacts.convertedBy,
        weightsManifest: [{ paths: ['weights.bin'], weights: artifacts.weightSpecs }],
      }
      writeFileSync(join(dir, 'model.json'), JSON.stringify(modelJSON))
      return {
        modelArtifactsInfo: {
          dateSaved: new Date(),
          modelTopologyType: 'JSON' as const,
          weightDataBytes: weightData.byteLength,
        },
      }
    },
  }
}

export async function loadModel(dir: string): Promise<tf.LayersModel> {
  return tf.loadLayersModel(fileIOHandler(dir))
}

/** One forward pass on a crop; output is L2-normalized. */
export function embed(model: tf.LayersModel, crop: Image): Float64Array {
  const out = tf.tidy(() => {
    const pixels = tf
      .tensor3d(Float32Array.from(crop.data, (v) => v / 255), [crop.height, crop.width, 3])
    const resized = tf.image.resizeBilinear(pixels, [INPUT_HEIGHT, INPUT_WIDTH])
    const batched = resized.expandDims(0)
    const feat = (model.predict(batched) as tf.Tensor).flatten()
    return tf.div(feat, tf.norm(feat))
  })
  const values = Float64Array.from(out.dataSync())
  out.dispose()
  return values
}
