/**
 * Sidebar state <-> query string serialization.
 *
 * The query string doubles as the GET /articles request and as the deep-link
 * format, so serialize(parse(serialize(s))) must equal serialize(s) and the
 * parameter names must match the server contract exactly.
 */

export type RankBy = 'newsworthiness' | 'outlet_relevance'

export interface SidebarState {
  dateFrom: string // ISO date or ''
  dateTo: string
  minNews: number | null
  maxNews: number | null
  rankBy: RankBy
  outlets: string[]
  page: number
  pageSize: number
}

export const DEFAULT_PAGE_SIZE = 20

export function defaultState(): SidebarState {
  return {
    dateFrom: '',
    dateTo: '',
    minNews: null,
    maxNews: null,
    rankBy: 'newsworthiness',
    outlets: [],
    page: 1,
    pageSize: DEFAULT_PAGE_SIZE,
  }
}

/** Query string (no leading '?'); defaults are omitted so URLs stay short. */
export function serializeState(state: SidebarState): string {
  const params = new URLSearchParams()
  if (state.dateFrom) params.set('date_from', state.dateFrom)
  if (state.dateTo) params.set('date_to', state.dateTo)
  if (state.minNews !== null) params.set('min_news', String(state.minNews))
  if (state.maxNews !== null) params.set('max_news', String(state.maxNews))
  if (state.rankBy !== 'newsworthiness') params.set('rank_by', state.rankBy)
  if (state.outlets.length) params.set('outlets', state.outlets.join(','))
  if (state.page !== 1) params.set('page', String(state.page))
  if (state.pageSize !== DEFAULT_PAGE_SIZE) params.set('page_size', String(state.pageSize))
  return params.toString()
}

export function parseState(query: string): SidebarState {
  const params = new URLSearchParams(query.startsWith('?') ? query.slice(1) : query)
  const state = defaultState()
  state.dateFrom = params.get('date_from') ?? ''
  state.dateTo = params.get('date_to') ?? ''
  const minNews = params.get('min_news')
  if (minNews !== null && minNews !== '' && !Number.isNaN(Number(minNews))) {
    state.minNews = Number(minNews)
  }
  const maxNews = params.get('max_news')
  if (maxNews !== null && maxNews !== '' && !Number.isNaN(Number(maxNews))) {
    state.maxNews = Number(maxNews)
  }
  if (params.get('rank_by') === 'outlet_relevance') state.rankBy = 'outlet_relevance'
  const outlets = params.get('outlets')
  if (outlets) state.outlets = outlets.split(',').filter((o) => o.length > 0)
  const page = Number(params.get('page'))
  if (Number.isInteger(page) && page >= 1) state.page = page
  const pageSize = Number(params.get('page_size'))
  if (Number.isInteger(pageSize) && pageSize >= 1 && pageSize <= 200) state.pageSize = pageSize
  return state
}

/** Problems that make the state unsubmittable; keyed by control field name. */
export function stateViolations(state: SidebarState): Array<{ field: string; message: string }> {
  const violations: Array<{ field: string; message: string }> = []
  if (state.rankBy === 'outlet_relevance' && state.outlets.length === 0) {
    violations.push({
      field: 'outlets',
      message: 'Select at least one outlet to rank by outlet relevance',
    })
  }
  if (state.dateFrom && state.dateTo && state.dateFrom > state.dateTo) {
    violations.push({ field: 'date_from', message: 'Start date is after end date' })
  }
  if (state.minNews !== null && state.maxNews !== null && state.minNews > state.maxNews) {
    violations.push({ field: 'min_news', message: 'Minimum score is above maximum' })
  }
  return violations
}
