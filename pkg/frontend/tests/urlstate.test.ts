import { describe, expect, it } from 'vitest'

import {
  DEFAULT_PAGE_SIZE,
  defaultState,
  parseState,
  serializeState,
  stateViolations,
  type SidebarState,
} from '../src/urlstate.js'

function roundTrip(state: SidebarState): SidebarState {
  return parseState(serializeState(state))
}

describe('serializeState/parseState', () => {
  it('defaults serialize to an empty query string', () => {
    expect(serializeState(defaultState())).toBe('')
    expect(parseState('')).toEqual(defaultState())
  })

  it('round-trips a fully populated state', () => {
    const state: SidebarState = {
      dateFrom: '2022-01-01',
      dateTo: '2022-06-30',
      minNews: 70,
      maxNews: 95,
      rankBy: 'outlet_relevance',
      outlets: ['wired', 'techcrunch'],
      page: 3,
      pageSize: 50,
    }
    expect(roundTrip(state)).toEqual(state)
    expect(serializeState(roundTrip(state))).toBe(serializeState(state))
  })

  it('uses the server parameter names', () => {
    const qs = serializeState({
      ...defaultState(),
      minNews: 70,
      rankBy: 'outlet_relevance',
      outlets: ['wired'],
    })
    const params = new URLSearchParams(qs)
    expect(params.get('min_news')).toBe('70')
    expect(params.get('rank_by')).toBe('outlet_relevance')
    expect(params.get('outlets')).toBe('wired')
  })

  it('parses a deep link with a leading question mark', () => {
    const state = parseState('?min_news=70&outlets=wired,vox&page=2')
    expect(state.minNews).toBe(70)
    expect(state.outlets).toEqual(['wired', 'vox'])
    expect(state.page).toBe(2)
    expect(state.pageSize).toBe(DEFAULT_PAGE_SIZE)
  })

  it('ignores malformed numeric values', () => {
    const state = parseState('min_news=abc&page=zero&page_size=-4')
    expect(state.minNews).toBeNull()
    expect(state.page).toBe(1)
    expect(state.pageSize).toBe(DEFAULT_PAGE_SIZE)
  })

  it('round-trips many generated states', () => {
    const rankChoices = ['newsworthiness', 'outlet_relevance'] as const
    for (let i = 0; i < 200; i++) {
      const state: SidebarState = {
        dateFrom: i % 3 === 0 ? '2022-02-11' : '',
        dateTo: i % 4 === 0 ? '2022-09-01' : '',
        minNews: i % 5 === 0 ? null : i % 101,
        maxNews: i % 7 === 0 ? null : 100 - (i % 30),
        rankBy: rankChoices[i % 2],
        outlets: i % 2 === 1 ? ['wired'] : i % 6 === 0 ? ['vox', 'salon'] : [],
        page: 1 + (i % 9),
        pageSize: [10, 20, 50][i % 3],
      }
      expect(roundTrip(state)).toEqual(state)
    }
  })
})

describe('stateViolations', () => {
  it('requires outlets before rank-by-relevance', () => {
    const violations = stateViolations({ ...defaultState(), rankBy: 'outlet_relevance' })
    expect(violations.some((v) => v.field === 'outlets')).toBe(true)
  })

  it('flags inverted ranges', () => {
    const violations = stateViolations({
      ...defaultState(),
      dateFrom: '2022-05-01',
      dateTo: '2022-01-01',
      minNews: 80,
      maxNews: 20,
    })
    const fields = violations.map((v) => v.field)
    expect(fields).toContain('date_from')
    expect(fields).toContain('min_news')
  })

  it('accepts a clean state', () => {
    expect(stateViolations(defaultState())).toEqual([])
  })
})
