/**
 * Boots the real API server in stub mode for the UI contract tests:
 * builds a fixture corpus, starts `cnd serve --providers stub` on a free-ish
 * port, waits for readiness, and tears everything down afterwards.
 */

import { spawn, spawnSync, type ChildProcess } from 'node:child_process'
import { mkdtempSync, rmSync } from 'node:fs'
import { tmpdir } from 'node:os'
import { dirname, join } from 'node:path'
import { fileURLToPath } from 'node:url'
import type { TestProject } from 'vitest/node'

const PYTHON = process.env.CND_PYTHON ?? 'python3'

async function waitForServer(base: string, attempts = 150): Promise<void> {
  for (let i = 0; i < attempts; i++) {
    try {
      const response = await fetch(`${base}/outlets`)
      if (response.ok) return
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 100))
  }
  throw new Error(`API server at ${base} did not become ready`)
}

export default async function setup(project: TestProject): Promise<() => Promise<void>> {
  const here = dirname(fileURLToPath(import.meta.url))
  const dataDir = mkdtempSync(join(tmpdir(), 'cnd-ui-fixture-'))

  const build = spawnSync(PYTHON, [join(here, 'fixture', 'build_fixture.py'), dataDir], {
    stdio: 'inherit',
  })
  if (build.status !== 0) {
    throw new Error(`fixture build failed with status ${build.status}`)
  }

  const port = 18100 + (process.pid % 1800)
  const base = `http://127.0.0.1:${port}`
  const server: ChildProcess = spawn(
    PYTHON,
    ['-m', 'cnd.cli', 'serve', '--providers', 'stub', '--dim', '64', '--seed', '0',
     '--port', String(port), '--data-dir', dataDir],
    { stdio: ['ignore', 'pipe', 'pipe'] },
  )
  server.stderr?.on('data', () => {}) // keep the pipe drained
  server.stdout?.on('data', () => {})
  await waitForServer(base)

  project.provide('apiBase', base)

  return async () => {
    server.kill('SIGINT')
    await new Promise((resolve) => setTimeout(resolve, 300))
    if (!server.killed || server.exitCode === null) server.kill('SIGKILL')
    rmSync(dataDir, { recursive: true, force: true })
  }
}
